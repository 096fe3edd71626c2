use dac_core::exact::Caps;
use dac_core::mc::{continuity_scan, ScanSettings};
use dac_core::rational::q;
use dac_core::tree::{dn_limit_point, nonmonotonicity_certificate, rcbounds_check, RcFamily, Status};

#[test]
fn small_k_proves_three_facts_only() {
    let b = nonmonotonicity_certificate(Some(3), None, &Caps::default()).unwrap();
    let statuses: Vec<Status> = b.certificates.iter().map(|c| c.status).collect();
    assert_eq!(statuses, [Status::Pass, Status::Pass, Status::Pass, Status::Fail]);
    assert_eq!(b.status(), Status::Fail);
    assert!(b.conclusion.is_none());
}

#[test]
fn path_gadget_bounds_hold() {
    let grid: Vec<_> = (0..5).map(|i| q(i, 10)).collect();
    let b = rcbounds_check(RcFamily::PathGadget, &grid, &Caps::default()).unwrap();
    assert_eq!(b.status(), Status::Pass, "{b}");
    assert!(rcbounds_check(RcFamily::EdgeGadget, &[q(1, 1)], &Caps::default()).is_err());
}

#[test]
fn scanner_finds_only_the_jump() {
    let grid: Vec<f64> = (0..=9).map(|i| i as f64 / 20.0).collect();
    let rep = continuity_scan(&dn_limit_point, &grid, ScanSettings::default()).unwrap();
    let flagged: Vec<f64> = rep.pairs.iter().filter(|s| s.flagged).map(|s| s.p_a).collect();
    assert_eq!(flagged, [0.0]);
    let csv = rep.curve.to_csv();
    assert!(csv.starts_with("p,r_lo,r_hi,method\n"));
    assert!(csv.contains("exact-root"));
}
