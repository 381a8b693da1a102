// temporary probe test
use ghz_nonlocal::constructions::chi;
use ghz_nonlocal::sdp::{solve_ppt, DiscriminationInstance, SdpParams};
use ghz_nonlocal::verifier::BipartiteInstance;

#[test]
fn probe_chi11() {
    let fam = chi(11).unwrap();
    let inst = BipartiteInstance::from_term_vectors(&fam).unwrap();
    let di = DiscriminationInstance::from_bipartite(&inst).unwrap();
    let params = SdpParams {
        rho: 0.25,
        check_every: 10,
        early_certify: true,
        max_iterations: 1500,
        ..SdpParams::default()
    };
    let start = std::time::Instant::now();
    let cert = solve_ppt(&di, &params).unwrap();
    println!(
        "FINAL chi11 iters={} time={:?} bound={:.6} primal={:.6} verdict={:?}",
        cert.iterations,
        start.elapsed(),
        cert.dual_bound,
        cert.primal,
        cert.verdict
    );
}
