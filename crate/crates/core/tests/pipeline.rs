use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tilespace::apcomplex::{ap_complex, chain_maps_power, CWComplex, ChainMaps};
use tilespace::dataset::{embedded_files, PentagonDataset};
use tilespace::homology::{cohomology, compose_induced, hull_cohomology, induced_endomorphisms};
use tilespace::matrix::IntMatrix;
use tilespace::symbolic1d::{ap_graph_1d, SymbolicSubstitution};

/// Rational dimensions of the direct limits, from ranks only: the limit is
/// the cohomology of the eventual image `E^k = F^N(C^k)`, on which the
/// cochain maps are invertible.
fn limit_dims_by_rank(c: &CWComplex, m: &ChainMaps) -> [usize; 3] {
    let delta = [c.boundary1.transpose(), c.boundary2.transpose()];
    let f = [&m.s0, &m.s1, &m.s2];
    let powers: Vec<IntMatrix> = f.iter().map(|f| f.pow(f.rows().max(1) as u32)).collect();
    let image_rank: Vec<usize> = powers.iter().map(IntMatrix::rank).collect();
    let coboundary_rank: Vec<usize> = (0..2).map(|k| (&delta[k] * &powers[k]).rank()).collect();
    let out = |k: usize| if k < 2 { coboundary_rank[k] } else { 0 };
    let inc = |k: usize| if k > 0 { coboundary_rank[k - 1] } else { 0 };
    [0, 1, 2].map(|k| image_rank[k] - out(k) - inc(k))
}

#[test]
fn hull_dims_match_the_rank_oracle() {
    let d = PentagonDataset::embedded();
    let ap = ap_complex(&d).unwrap();
    let oracle = limit_dims_by_rank(&ap.complex, &ap.maps);
    let report = hull_cohomology(&d).unwrap();
    assert_eq!(report.rational_dims(), oracle.to_vec());
}

#[test]
fn fibonacci_h1_has_rational_dimension_two() {
    let g = ap_graph_1d(&SymbolicSubstitution::fibonacci()).unwrap();
    let c = CWComplex::new(
        g.complex.boundary1.clone(),
        IntMatrix::zeros(g.complex.boundary1.cols(), 0),
    )
    .unwrap();
    let m = ChainMaps {
        s2: IntMatrix::zeros(0, 0),
        s1: g.maps.s1.clone(),
        s0: g.maps.s0.clone(),
    };

    // Every 1-cochain is a cocycle: the limit is the stable image of F
    // modulo coboundaries.
    let f = g.maps.s1.pow(8);
    let d0 = g.complex.boundary1.transpose();
    let oracle = f.hstack(&d0).rank() - d0.rank();
    assert_eq!(oracle, 2);
    assert_eq!(limit_dims_by_rank(&c, &m)[1], 2);

    let h = cohomology(&g.complex);
    let induced = induced_endomorphisms(&g.complex, &h, &g.maps).unwrap();
    let limit = tilespace::homology::direct_limit(&h[1].group, &induced[1]);
    assert_eq!(limit.rational_dim, 2);
    assert!(limit.integral.free_limit_is_lattice);
}

#[test]
fn second_power_induces_the_square() {
    let d = PentagonDataset::embedded();
    let ap = ap_complex(&d).unwrap();
    let c = &ap.complex;
    let h = cohomology(c);
    let once = induced_endomorphisms(c, &h, &ap.maps).unwrap();
    let m2 = chain_maps_power(&d, &ap.placement, c, 2).unwrap();
    let twice = induced_endomorphisms(c, &h, &m2).unwrap();
    for k in 0..3 {
        assert_eq!(
            twice[k],
            compose_induced(&h[k], &once[k], &once[k]),
            "degree {k}"
        );
    }
}

fn shuffled(text: &str, rng: &mut ChaCha8Rng) -> String {
    let mut lines: Vec<&str> = text.lines().collect();
    let header = lines.remove(0);
    lines.shuffle(rng);
    let mut out = String::from(header);
    for l in lines {
        out.push('\n');
        out.push_str(l);
    }
    out.push('\n');
    out
}

#[test]
fn row_order_does_not_matter() {
    let base = PentagonDataset::embedded();
    let ap = ap_complex(&base).unwrap();
    let files = embedded_files();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let t: Vec<String> = files
            .iter()
            .map(|(_, text)| shuffled(text, &mut rng))
            .collect();
        let d = PentagonDataset::from_csv(&t[0], &t[1], &t[2], &t[3]).unwrap();
        assert_eq!(d, base);
        let other = ap_complex(&d).unwrap();
        assert_eq!(other.complex, ap.complex);
        assert_eq!(other.maps, ap.maps);
    }
}
