use cartan_core::automorphisms::{self, LieLinearAut};
use cartan_core::bergman;
use cartan_core::biholomorphisms::{self, BihId, BihTag};
use cartan_core::domains::{self, DomainId};
use cartan_core::proper_maps::{self, MapId};
use cartan_core::sampling;
use cartan_core::{CPoint, Complex64, Point};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn vector(n: usize) -> impl Strategy<Value = CPoint> {
    prop::collection::vec(complex(), n).prop_map(|v| CPoint::new(v).unwrap())
}

fn sized_vector(lo: usize, hi: usize) -> impl Strategy<Value = (usize, CPoint)> {
    (lo..=hi).prop_flat_map(|n| (Just(n), vector(n)))
}

fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0f64..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

fn in_disc() -> impl Strategy<Value = Complex64> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn square_first(z: &CPoint) -> CPoint {
    let mut v = z.coords().to_vec();
    v[0] = v[0] * v[0];
    CPoint::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn minkowski_is_homogeneous((n, w) in sized_vector(2, 5), lambda in in_disc()) {
        let d = DomainId::QuotientL { n };
        let weights = d.weights().unwrap();
        let lhs = domains::minkowski(&d, &domains::dilate(&w, &weights, lambda), 1e-13).unwrap();
        let rhs = lambda.norm() * domains::minkowski(&d, &w, 1e-13).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11 * (1.0 + rhs));
    }

    #[test]
    fn lie_membership_matches_quotient_membership((n, z) in sized_vector(2, 6)) {
        let lie = domains::margin(&DomainId::LieBall { n }, &Point::Vector(z.clone())).unwrap();
        let quotient = domains::margin(&DomainId::QuotientL { n }, &Point::Vector(square_first(&z))).unwrap();
        prop_assume!(lie.abs() > 1e-9 && quotient.abs() > 1e-9);
        prop_assert_eq!(lie > 0.0, quotient > 0.0);
    }

    #[test]
    fn lie_margin_forms_share_sign((_n, z) in sized_vector(1, 6)) {
        let a = domains::lie_ball_margin(z.coords());
        let b = domains::lie_ball_sqrt_form_margin(z.coords());
        prop_assume!(a.abs() > 1e-9);
        prop_assert_eq!(a > 0.0, b > 0.0);
    }

    #[test]
    fn deck_involution_is_a_deck_transformation(index in 0usize..16, seed in any::<u64>()) {
        let maps = MapId::catalogue();
        let m = &maps[index % maps.len()];
        let mut rng = sampling::seeded_rng(seed);
        let p = proper_maps::sample_source(m, &mut rng).unwrap();
        let g = proper_maps::deck_apply(m, &p).unwrap();
        let scale = 1.0 + p.norm_sqr().sqrt();
        prop_assert!(proper_maps::deck_apply(m, &g).unwrap().distance(&p) < 1e-12 * scale);
        let same = proper_maps::eval(m, &g).unwrap().distance(&proper_maps::eval(m, &p).unwrap());
        prop_assert!(same < 1e-12 * scale * scale);
        prop_assert!(proper_maps::source_margin(m, &g).unwrap() > -1e-12);
    }

    #[test]
    fn fiber_contains_the_source_point(index in 0usize..16, seed in any::<u64>()) {
        let maps = MapId::catalogue();
        let m = &maps[index % maps.len()];
        let mut rng = sampling::seeded_rng(seed);
        let p = proper_maps::sample_source(m, &mut rng).unwrap();
        prop_assume!(proper_maps::source_margin(m, &p).unwrap() > 1e-9);
        let f = proper_maps::fiber(m, &proper_maps::eval(m, &p).unwrap()).unwrap();
        let nearest = f.preimages.iter().map(|q| q.distance(&p)).fold(f64::INFINITY, f64::min);
        prop_assert!(nearest < 1e-9 * (1.0 + p.norm_sqr().sqrt()));
        prop_assert!(f.preimages.len() <= 2);
    }

    #[test]
    fn quotient_kernel_is_hermitian(n in 2usize..7, seed in any::<u64>()) {
        let d = DomainId::QuotientL { n };
        let mut rng = sampling::seeded_rng(seed);
        let p = domains::sample_uniform(&d, &mut rng).unwrap();
        let q = domains::sample_uniform(&d, &mut rng).unwrap();
        let a = bergman::k_quotient_closed(&p, &q, n).unwrap().value;
        let b = bergman::k_quotient_closed(&q, &p, n).unwrap().value;
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn kernel_forms_agree(n in 2usize..9, seed in any::<u64>()) {
        let d = DomainId::LieBall { n };
        let mut rng = sampling::seeded_rng(seed);
        let z = domains::sample_uniform(&d, &mut rng).unwrap();
        let w = domains::sample_uniform(&d, &mut rng).unwrap();
        let diff = bergman::k_quotient_diff(&z, &w, n).unwrap();
        let closed = bergman::k_quotient_closed(&square_first(&z), &square_first(&w), n).unwrap().value;
        prop_assert!((diff - closed).norm() < 1e-10 * closed.norm());
    }

    #[test]
    fn kernel_diagonal_is_positive(n in 2usize..9, seed in any::<u64>()) {
        let mut rng = sampling::seeded_rng(seed);
        let p = domains::sample_uniform(&DomainId::QuotientL { n }, &mut rng).unwrap();
        let k = bergman::k_quotient_closed(&p, &p, n).unwrap().value;
        prop_assert!(k.re > 0.0);
        prop_assert!(k.im.abs() <= 1e-12 * k.re);
    }

    #[test]
    fn biholomorphisms_round_trip(index in 0usize..6, seed in any::<u64>()) {
        let b = BihId::forward(BihTag::ALL[index]);
        let mut rng = sampling::seeded_rng(seed);
        let p = biholomorphisms::sample_ambient(&b.source_domain(), &mut rng).unwrap();
        let q = biholomorphisms::bih_eval(&b, &p).unwrap();
        prop_assert!(biholomorphisms::bih_inverse(&b, &q).unwrap().distance(&p) < 1e-12);
        let back = biholomorphisms::bih_eval(&b.inverted(), &q).unwrap();
        prop_assert!(back.distance(&p) < 1e-12);
    }

    #[test]
    fn commuting_squares_hold(n in 2usize..5, seed in any::<u64>()) {
        let mut rng = sampling::seeded_rng(seed);
        let z = domains::sample_uniform(&DomainId::LieBall { n }, &mut rng).unwrap();
        prop_assert!(biholomorphisms::commuting_square_residual_at(n, &z).unwrap() < 1e-12);
    }

    #[test]
    fn rho_is_a_circle_action((_n, w) in sized_vector(2, 6), a in unimodular(), b in unimodular()) {
        let lhs = automorphisms::rho_omega(a, &automorphisms::rho_omega(b, &w).unwrap()).unwrap();
        let rhs = automorphisms::rho_omega(a * b, &w).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-14);
    }

    #[test]
    fn extended_automorphisms_preserve_the_quotient(k in 1usize..5, seed in any::<u64>()) {
        let mut rng = sampling::seeded_rng(seed);
        let a = LieLinearAut::random(&mut rng, k);
        let w = domains::sample_uniform(&DomainId::QuotientL { n: k + 1 }, &mut rng).unwrap();
        let image = automorphisms::extended_quotient_aut(&a, &w).unwrap();
        prop_assert!(image.branch_residual < 1e-12);
        let before = domains::margin(&DomainId::QuotientL { n: k + 1 }, &Point::Vector(w)).unwrap();
        let after = domains::margin(&DomainId::QuotientL { n: k + 1 }, &Point::Vector(image.image)).unwrap();
        prop_assert!(after > 0.0);
        prop_assert!((after - before).abs() < 1e-9 || before > 0.0);
    }

    #[test]
    fn uniform_quotient_samples_are_inside(n in 2usize..9, seed in any::<u64>()) {
        let d = DomainId::QuotientL { n };
        let mut rng = sampling::seeded_rng(seed);
        let w = domains::sample_uniform(&d, &mut rng).unwrap();
        prop_assert!(domains::margin(&d, &Point::Vector(w)).unwrap() > 0.0);
    }

    #[test]
    fn points_round_trip_through_json((_n, z) in sized_vector(1, 6)) {
        let text = serde_json::to_string(&z).unwrap();
        let back: CPoint = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn automorphisms_round_trip_through_json(k in 1usize..6, seed in any::<u64>()) {
        let mut rng = sampling::seeded_rng(seed);
        let a = LieLinearAut::random(&mut rng, k);
        let back: LieLinearAut = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }
}

/// The quotient sampler is uniform: the fraction of samples with |w₁| < 1/4
/// matches the Monte-Carlo volume fraction of that slab.
#[test]
fn quotient_sampler_matches_volume_fraction() {
    let n = 3;
    let d = DomainId::QuotientL { n };
    let mut rng = sampling::seeded_rng(11);
    let samples = 200_000;
    let hits = (0..samples)
        .filter(|_| domains::sample_uniform(&d, &mut rng).unwrap()[0].norm() < 0.25)
        .count();
    let fraction = hits as f64 / samples as f64;
    let radii = domains::bounding_box(&d).unwrap();
    let mut rng = sampling::seeded_rng(12);
    let (mut inside, mut slab) = (0usize, 0usize);
    for _ in 0..2_000_000 {
        let w = sampling::uniform_polydisc(&mut rng, &radii);
        if domains::margin(&d, &Point::Vector(w.clone())).unwrap() > 0.0 {
            inside += 1;
            if w[0].norm() < 0.25 {
                slab += 1;
            }
        }
    }
    let expected = slab as f64 / inside as f64;
    let se = (fraction * (1.0 - fraction) / samples as f64).sqrt()
        + (expected * (1.0 - expected) / inside as f64).sqrt();
    assert!((fraction - expected).abs() < 4.0 * se, "{fraction} vs {expected} (se {se})");
}
