use fpi_core::stieltjes::TransformOptions;
use fpi_core::sweep::{
    linear_grid, log_grid, map_grid, map_grid_sequential, transform_sweep, transform_sweep_sequential,
};
use fpi_core::TaylorFunction;

#[test]
fn grids_hit_both_ends() {
    let g = log_grid(1e-4, 1e-1, 7).unwrap();
    assert_eq!((g[0], g[6]), (1e-4, 1e-1));
    assert!(g.windows(2).all(|w| (w[1] / w[0] - 10f64.sqrt()).abs() < 1e-12));
    let g = linear_grid(0.1, 0.5, 5).unwrap();
    assert_eq!((g[0], g[4]), (0.1, 0.5));
    assert!(log_grid(0.0, 1.0, 3).is_err());
    assert!(linear_grid(0.5, 0.1, 3).is_err());
}

#[test]
fn parallel_and_sequential_sweeps_agree_exactly() {
    let f: TaylorFunction = "monexp(1,2)".parse().unwrap();
    let grid = log_grid(1e-3, 0.9, 40).unwrap();
    let opts = TransformOptions::default();
    for (n, nu, a) in [(1, 0.0, f64::INFINITY), (3, 0.5, 1.0)] {
        let par = transform_sweep(&f, n, nu, a, &grid, &opts);
        let seq = transform_sweep_sequential(&f, n, nu, a, &grid, &opts);
        for (p, s) in par.iter().zip(&seq) {
            let (p, s) = (p.as_ref().unwrap(), s.as_ref().unwrap());
            assert_eq!(p.total.to_bits(), s.total.to_bits());
            assert_eq!(p.k_used, s.k_used);
        }
    }
    assert_eq!(map_grid(&grid, |w| w * w), map_grid_sequential(&grid, |w| w * w));
}
