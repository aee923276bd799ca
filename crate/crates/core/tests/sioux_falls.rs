use clearsearch::network::{parse_tntp, simulate, Mode, RunConfig};

fn sioux_falls() -> clearsearch::network::Network {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/SiouxFalls_net.tntp");
    parse_tntp(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn shape_after_preprocessing() {
    let net = sioux_falls();
    assert_eq!(net.n_vertices(), 24);
    assert_eq!(net.edges().len(), 38);
    let min = net.edges().iter().map(|e| e.len).fold(f64::INFINITY, f64::min);
    assert_eq!(min, 4.0);
    assert_eq!(net.label(net.root()), 1);
}

#[test]
fn generous_budget_clears_everything() {
    let net = sioux_falls();
    let total = net.total_length();
    for mode in [Mode::Cpt, Mode::Rpt] {
        let report = simulate(&net, net.root(), &RunConfig::new(2.0, 20.0 * total, mode)).unwrap().report;
        assert!(report.covered_all);
        assert!((report.clearance_at_budget - total).abs() < 1e-9 * total);
    }
}
