use isopair::bipoly::{bezout_resultant, gcd_bivariate, parse_int_poly, resultant_w};
use isopair::innertoral::{classify_inner_toral, sample_variety, Region, SamplerConfig, Verdict};
use isopair::opmodel::{char_numerator, random_inner, taylor_truncate, verify_annihilation, MatrixRationalInner};
use isopair::parallel::with_threads;
use isopair::torusmeasure::{gram, MonomialBranch, TorusMeasure, TrigWeight};
use isopair::{BiPoly, ExactComplex, ExactPoly};
use proptest::prelude::*;

fn poly(max_deg: usize) -> impl Strategy<Value = ExactPoly> {
    (0..=max_deg, 0..=max_deg)
        .prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec((-4i64..=4, -2i64..=2), m + 1), n + 1))
        .prop_map(|g| BiPoly::from_grid(g.into_iter().map(|r| r.into_iter().map(|(a, b)| ExactComplex::from_ints(a, b)).collect()).collect()))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = ExactPoly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn branch() -> impl Strategy<Value = MonomialBranch> {
    (1u32..=3, -3i64..=3, 0usize..4, 1i64..=3).prop_map(|(a, b, ph, c)| {
        let phase = [(1, 0), (0, 1), (-1, 0), (0, -1)][ph];
        MonomialBranch::new(a, b, ExactComplex::from_ints(phase.0, phase.1), TrigWeight::constant(c).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_bidegree_and_exact_division(p in nonzero_poly(3), q in nonzero_poly(3)) {
        let pq = &p * &q;
        let (a, b) = (p.bidegree(), q.bidegree());
        prop_assert_eq!(pq.bidegree(), (a.0 + b.0, a.1 + b.1));
        prop_assert_eq!(pq.div_exact(&q), Some(p.clone()));
    }

    #[test]
    fn reversal_is_an_involution(p in nonzero_poly(3)) {
        let d = p.bidegree();
        let r = p.reverse(d).unwrap();
        prop_assert_eq!(r.reverse(d).unwrap(), p);
    }

    #[test]
    fn gcd_divides_both(p in nonzero_poly(2), q in nonzero_poly(2), c in nonzero_poly(1)) {
        let (a, b) = (&p * &c, &q * &c);
        let g = gcd_bivariate(&a, &b).unwrap();
        prop_assert!(a.div_exact(&g).is_some());
        prop_assert!(b.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some());
    }

    #[test]
    fn bezout_identity_holds(p in nonzero_poly(2), q in nonzero_poly(2)) {
        prop_assume!(p.deg_w() > 0 && q.deg_w() > 0);
        prop_assume!(gcd_bivariate(&p, &q).unwrap().is_constant());
        let bz = bezout_resultant(&p, &q).unwrap();
        let c = BiPoly::from_z_poly(&bz.c);
        prop_assert_eq!(&(&bz.a * &p) + &(&bz.b * &q), c.clone());
        prop_assert!(c.eq_up_to_scalar(&BiPoly::from_z_poly(&resultant_w(&p, &q).unwrap())));
    }

    #[test]
    fn gram_is_hermitian_psd(bs in prop::collection::vec(branch(), 1..4), n in 1usize..4, m in 1usize..4) {
        let mu = TorusMeasure::new(bs).unwrap();
        let g = gram(&mu, (n, m));
        prop_assert!(g.is_hermitian());
        let h = g.float();
        let eig = (&h + h.adjoint()).scale(0.5).symmetric_eigen();
        let top = eig.eigenvalues.max();
        prop_assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-10 * top.max(1.0)));
    }

    #[test]
    fn measure_json_round_trip(bs in prop::collection::vec(branch(), 1..4)) {
        let mu = TorusMeasure::new(bs).unwrap();
        prop_assert_eq!(TorusMeasure::from_json(&mu.to_json()).unwrap(), mu);
    }

    #[test]
    fn random_inner_is_annihilated(seed in 0u64..1000, a in 0usize..3, b in 1usize..3) {
        let phi = random_inner(2, &[a, b], seed).unwrap();
        let q = char_numerator(&phi).unwrap().q_min;
        let r = verify_annihilation(&q, &taylor_truncate(&phi, 10).unwrap(), 4, 0.0).unwrap();
        prop_assert!(r.passed && r.max_residual == 0.0);
        prop_assert_eq!(MatrixRationalInner::from_json(&phi.to_json()).unwrap(), phi);
    }

    #[test]
    fn sampled_points_lie_on_variety(p in nonzero_poly(3)) {
        prop_assume!(p.deg_w() > 0);
        let cfg = SamplerConfig::default();
        let f = p.to_float();
        for (z, w) in sample_variety(&f, Region::Disk, 16, &cfg) {
            prop_assert!(f.eval(&z, &w).norm() <= cfg.tol * f.norm());
            prop_assert!(w.norm() < 1.0);
        }
    }

    #[test]
    fn products_of_inner_toral_factors_stay_inner_toral(k in 1usize..4, sign in prop::bool::ANY) {
        // z^k - w and z - ±w^k
        let q1 = parse_int_poly(&format!("z^{k} - w")).unwrap();
        let q2 = parse_int_poly(&format!("z {} w^{k}", if sign { "-" } else { "+" })).unwrap();
        let r = classify_inner_toral(&(&q1 * &q2), &SamplerConfig::with_samples(64)).unwrap();
        prop_assert_eq!(r.inner_toral, Verdict::Yes);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let q = &parse_int_poly("z^2 - w^2").unwrap() * &parse_int_poly("z^3 - w^2").unwrap();
    let cfg = SamplerConfig::with_samples(128);
    let one = with_threads(1, || classify_inner_toral(&q, &cfg).unwrap());
    let many = with_threads(4, || classify_inner_toral(&q, &cfg).unwrap());
    assert_eq!(one, many);
    let mu = isopair::fixtures::measure_composite();
    assert_eq!(with_threads(1, || gram(&mu, (6, 6))), with_threads(3, || gram(&mu, (6, 6))));
}
