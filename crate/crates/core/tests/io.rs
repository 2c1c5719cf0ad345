use num_complex::Complex64;
use paraflux::io::{decode_field, load_field, save_field, write_decomposition};
use paraflux::paraproduct::{verify_supports, SUPPORT_TOL};
use paraflux::testbank::default_bank;
use paraflux::{decompose_product, min_gap, Domain, DyadicSystem, Field, Grid};
use proptest::prelude::*;

proptest! {
    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        let _ = decode_field(&bytes);
    }

    #[test]
    fn truncated_payloads_are_rejected(cut in 1usize..200) {
        let g = Grid::periodic(1, 16).unwrap();
        let f = Field::plane_wave(&g, &[3], Complex64::new(1.0, -1.0)).unwrap();
        let mut bytes = Vec::new();
        paraflux::io::write_field(&mut bytes, &f, Domain::Physical).unwrap();
        let keep = bytes.len().saturating_sub(cut);
        prop_assert!(decode_field(&bytes[..keep]).is_err());
    }
}

#[test]
fn planar_field_survives_disk() {
    let dir = tempfile::tempdir().unwrap();
    let g = Grid::periodic(2, 32).unwrap();
    let f = Field::from_fn(&g, |x| Complex64::new((x[0] + 2.0 * x[1]).cos(), x[1].sin()));
    let path = dir.path().join("f.fld");
    save_field(&path, &f, Domain::Spectral).unwrap();
    let back = load_field(&path).unwrap();
    assert!(back.l2_distance(&f).unwrap() < 1e-14);
}

#[test]
fn dumped_terms_rebuild_the_product() {
    let sys = DyadicSystem::new(&Grid::periodic(1, 128).unwrap());
    let bank = default_bank(128);
    let fields: Vec<Field> = [3, 15, 20].iter().map(|&i| bank[i].generate(&sys).unwrap()).collect();
    let pd = decompose_product(&fields, &sys, min_gap(3).unwrap()).unwrap();
    let rep = verify_supports(&pd, &sys, SUPPORT_TOL);
    let dir = tempfile::tempdir().unwrap();
    let man = write_decomposition(dir.path(), &pd, &rep, sys.jmax(), false).unwrap();
    assert!(man.reconstruction_error < 1e-12);
    let mut sum = load_field(dir.path().join("pi2.fld")).unwrap();
    for k in 1..=3 {
        sum = sum.add(&load_field(dir.path().join(format!("pi1_k{k}.fld"))).unwrap()).unwrap();
    }
    let product = load_field(dir.path().join("product.fld")).unwrap();
    assert!(sum.l2_distance(&product).unwrap() <= 1e-12 * product.l2_spectral());
}
