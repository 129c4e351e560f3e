//! Exhaustive round trips of every map at small sizes.

use is102::bijection::{enumerate_tilings, is_to_tiling, phi, phi_inv, psi, psi_inv, schroeder_to_is, tiling_to_is};
use is102::fpath::{enumerate_lf, sample_path};
use is102::paths::{enumerate_schroeder, enumerate_uvd, schroeder_to_uvd, uvd_to_schroeder};
use is102::sequence::{enumerate_is, pat, pattern_102};
use std::collections::BTreeSet;

#[test]
fn phi_is_a_bijection_onto_102_avoiders() {
    for n in 0..=5 {
        let paths = enumerate_lf(n).unwrap();
        let target = enumerate_is(n + 1, &[pattern_102()]).unwrap();
        let image: BTreeSet<_> = paths.iter().map(phi).collect();
        assert_eq!(image.len(), paths.len(), "phi not injective at n={n}");
        assert_eq!(image, target.iter().cloned().collect(), "phi not onto at n={n}");
        for e in &target {
            assert_eq!(phi(&phi_inv(e).unwrap()), *e);
        }
    }
}

#[test]
fn phi_inv_rejects_102() {
    let e = is102::InversionSequence::new(vec![0, 1, 0, 2]).unwrap();
    assert!(phi_inv(&e).is_err());
}

#[test]
fn psi_is_a_bijection_onto_uvd_paths() {
    for n in 0..=5 {
        let paths = enumerate_lf(n).unwrap();
        let target = enumerate_uvd(n + 1).unwrap();
        let image: BTreeSet<_> = paths.iter().map(psi).collect();
        assert_eq!(image, target.iter().cloned().collect(), "n={n}");
        assert_eq!(image.len(), paths.len());
        for s in &target {
            assert_eq!(psi(&psi_inv(s).unwrap()), *s);
        }
    }
}

#[test]
fn sample_path_round_trips() {
    let q = sample_path();
    assert_eq!(phi_inv(&phi(&q)).unwrap(), q);
    assert_eq!(psi_inv(&psi(&q)).unwrap(), q);
}

#[test]
fn m_and_composition_are_bijections() {
    for n in 1..=5 {
        let sps = enumerate_schroeder(n).unwrap();
        let uvd: BTreeSet<_> = enumerate_uvd(n).unwrap().into_iter().collect();
        let image: BTreeSet<_> = sps.iter().map(schroeder_to_uvd).collect();
        assert_eq!(image, uvd, "n={n}");
        for p in &sps {
            assert_eq!(uvd_to_schroeder(&schroeder_to_uvd(p)), *p);
        }
        let is_image: BTreeSet<_> = sps.iter().map(|p| schroeder_to_is(p).unwrap()).collect();
        let target: BTreeSet<_> = enumerate_is(n, &[pattern_102()]).unwrap().into_iter().collect();
        assert_eq!(is_image, target, "n={n}");
    }
}

#[test]
fn tilings_round_trip() {
    for n in 1..=7 {
        let seqs = enumerate_is(n, &[pattern_102(), pat("012")]).unwrap();
        let image: BTreeSet<_> = seqs.iter().map(|e| is_to_tiling(e).unwrap()).collect();
        assert_eq!(image, enumerate_tilings(2 * n - 2).into_iter().collect(), "n={n}");
        for e in &seqs {
            assert_eq!(tiling_to_is(&is_to_tiling(e).unwrap(), n).unwrap(), *e);
        }
    }
}
