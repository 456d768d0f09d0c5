mod common;

use common::{random_condition_a_config, rng};
use heun_connect::connection::{
    connect_to_point, connection_matrix, frobenius_distance, frobenius_pair, overlap_point, reconstruction_residual,
    ConnectOptions,
};

const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

#[test]
fn closed_form_matrices_over_condition_a_configs() {
    let mut rng = rng(31);
    let opts = ConnectOptions::default();
    let id = [[1.0.into(), 0.0.into()], [0.0.into(), 1.0.into()]];
    let (mut dual, mut recon, mut inverse, mut det): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut checked = 0;
    for _ in 0..25 {
        let cfg = random_condition_a_config(&mut rng);
        let cuts = opts.cuts(&cfg);
        for (k, l) in PAIRS {
            let Some(at) = overlap_point(&cfg, k, l, &opts) else { continue };
            let ckl = connection_matrix(&cfg, k, l, at, &opts).unwrap();
            let clk = connection_matrix(&cfg, l, k, at, &opts).unwrap();
            dual = dual.max(ckl.dual_path_discrepancy.unwrap());
            recon = recon.max(reconstruction_residual(&cfg, &ckl, None, &opts).unwrap());
            inverse = inverse.max(frobenius_distance(&ckl.compose(&clk).unwrap().entries, &id));
            let wk = frobenius_pair(&cfg, k, opts.n_terms, &cuts).unwrap().wronskian(at, &opts.eval).unwrap();
            let wl = frobenius_pair(&cfg, l, opts.n_terms, &cuts).unwrap().wronskian(at, &opts.eval).unwrap();
            det = det.max((ckl.determinant() - wk / wl).norm() / (wk / wl).norm());
            assert_eq!(connection_matrix(&cfg, k, k, at, &opts).unwrap().entries, id);
            checked += 1;
        }
    }
    assert!(checked >= 100, "only {checked} pairs had an overlap point");
    assert!(dual <= 1e-10, "dual path {dual:e}");
    assert!(recon <= 1e-8, "reconstruction {recon:e}");
    assert!(inverse <= 1e-9, "inverse identity {inverse:e}");
    assert!(det <= 1e-10, "determinant {det:e}");
}

#[test]
fn frobenius_pairs_in_canonical_basis() {
    let mut rng = rng(32);
    let opts = ConnectOptions::default();
    for _ in 0..10 {
        let cfg = random_condition_a_config(&mut rng);
        for k in [1, 2, 4] {
            let pair = frobenius_pair(&cfg, k, opts.n_terms, &opts.cuts(&cfg)).unwrap();
            let at = pair.center() * 0.7;
            let Ok(m) = connect_to_point(&cfg, k, at, &opts) else { continue };
            let w = pair.wronskian(at, &opts.eval).unwrap();
            assert!((m.determinant() - w).norm() <= 1e-10 * w.norm());
            assert!(reconstruction_residual(&cfg, &m, None, &opts).unwrap() <= 1e-8);
        }
    }
}
