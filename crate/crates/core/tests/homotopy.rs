use itw::dispersion::Parity;
use itw::homotopy::{finite_difference_slope, initial_slope, trace_homotopy, Termination};

#[test]
fn paths_end_cleanly() {
    for m in [2.5, 7.0 / 3.0, 3.0, 1.5] {
        for j in 1..=10 {
            let path = trace_homotopy(j, m, m, 400).unwrap_or_else(|e| panic!("m = {m}, j = {j}: {e}"));
            let (beta, z) = path.last();
            // a collision turns the real root into a complex pair before β = m
            if path.terminated_by == Termination::ReachedTarget {
                assert!((beta - m).abs() < 1e-9);
            }
            assert!(path.samples.windows(2).all(|w| w[1].0 >= w[0].0));
            assert!(z.re >= (j as f64 - 1.0) / m - 1e-9, "m = {m}, j = {j}, z = {z}");
        }
    }
}

#[test]
fn path_ending_on_a_quadruple_edge() {
    // (j+1)/m = 10/2.5 = 4 is an integer
    let (beta, z) = trace_homotopy(9, 2.5, 2.5, 400).unwrap().last();
    assert!((beta - 2.5).abs() < 1e-12);
    assert!((z.re - 4.0).abs() < 1e-6 && z.im.abs() < 1e-6, "{z}");
}

#[test]
fn slope_matches_finite_difference() {
    for j in 1..=6 {
        let fd = finite_difference_slope(j, 2.5, 1e-5, Parity::Odd).unwrap();
        let exact = initial_slope(j, 2.5, Parity::Odd);
        assert!((fd - exact).abs() <= 1e-3 * exact.abs() + 1e-9, "j = {j}: {fd} vs {exact}");
    }
}
