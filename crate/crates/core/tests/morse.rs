use nalgebra::DVector;
use proptest::prelude::*;
use taut_core::morse::{criticality_residual, find_critical_set, morse_index, HeightProblem, HeightSpec, SearchConfig};
use taut_core::orbit::{cohomogeneity, orbit_chart, substantial_span};
use taut_core::repbuilder::{build_rep, exp_map, LinearRepresentation};

fn residual_at(rep: &LinearRepresentation, x: &DVector<f64>, q: &DVector<f64>, c: &[f64]) -> f64 {
    let g = exp_map(&rep.element(c), 1.0).unwrap();
    criticality_residual(rep, &(g * x), q).unwrap().0
}

/// Central differences of `t ↦ r(exp(Σ t_j X_j) x)` at `t = 0`.
fn fd_gradient(rep: &LinearRepresentation, x: &DVector<f64>, q: &DVector<f64>) -> DVector<f64> {
    let h = 1e-6;
    DVector::from_fn(rep.group_dim(), |j, _| {
        let mut plus = vec![0.0; rep.group_dim()];
        let mut minus = plus.clone();
        plus[j] = h;
        minus[j] = -h;
        (residual_at(rep, x, q, &plus) - residual_at(rep, x, q, &minus)) / (2.0 * h)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_gradient_matches_finite_differences(
        x in prop::collection::vec(-1.0f64..1.0, 7),
        q in prop::collection::vec(-1.0f64..1.0, 7),
    ) {
        let rep = build_rep("g2: R7").unwrap();
        let (x, q) = (DVector::from_vec(x), DVector::from_vec(q));
        let (_, grad) = criticality_residual(&rep, &x, &q).unwrap();
        let fd = fd_gradient(&rep, &x, &q);
        prop_assert!((grad - fd).amax() < 1e-6);
    }

    #[test]
    fn residual_is_invariant_under_the_stabilizer_of_q(
        c in prop::collection::vec(-1.0f64..1.0, 3),
        x in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        // rotations about e3 fix the height direction e3
        let rep = build_rep("so3: R3").unwrap();
        let q = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let x = DVector::from_vec(x);
        let chart = orbit_chart(&rep, &q).unwrap();
        let k = chart.isotropy_coeffs.column(0) * c[0];
        let g = exp_map(&rep.element(k.as_slice()), 1.0).unwrap();
        let a = criticality_residual(&rep, &x, &q).unwrap().0;
        let b = criticality_residual(&rep, &(g * &x), &q).unwrap().0;
        prop_assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn sphere_height_has_a_maximum_and_a_minimum() {
    let rep = build_rep("so3: R3").unwrap();
    let p = rep.parse_point("e1").unwrap();
    let spec = HeightSpec::height(p.clone());
    let top = morse_index(&rep, &p, &spec).unwrap();
    let bottom = morse_index(&rep, &(-&p), &spec).unwrap();
    assert_eq!((top.index, top.nullity), (2, 0));
    assert_eq!((bottom.index, bottom.nullity), (0, 0));
    let e2 = rep.parse_point("e2").unwrap();
    assert!(morse_index(&rep, &e2, &spec).is_err());
}

#[test]
fn hessian_is_symmetric() {
    let rep = build_rep("su3: C3 + C3").unwrap();
    let p = rep.parse_point("e1; e2").unwrap();
    let problem = HeightProblem::new(&rep, HeightSpec::height(p.clone())).unwrap();
    let h = problem.hessian(&p);
    assert!((&h - h.transpose()).amax() < 1e-14);
}

#[test]
fn torus_critical_points_and_indices() {
    let rep = build_rep("model: torus-lemma-a").unwrap();
    let p = rep.parse_point("1; 1; 1").unwrap();
    let cfg = SearchConfig::for_rep(&rep, 7).with_starts(200);
    let inv = find_critical_set(&rep, &p, &HeightSpec::height(p.clone()), &cfg).unwrap();
    assert_eq!(inv.dimension_profile(), vec![(0, 6)]);
    assert_eq!(inv.total_betti_sum, 6);
    let mut idx = inv.isolated_indices();
    idx.sort_unstable();
    // six nondegenerate points on a 2-torus: χ = 2 − 3 + 1 = 0
    assert_eq!(idx, vec![0, 0, 1, 1, 1, 2]);
    let chi: i64 = idx.iter().map(|&i| if i % 2 == 0 { 1 } else { -1 }).sum();
    assert_eq!(chi, 0);
}

#[test]
fn two_vectors_under_so3_trace_height() {
    let rep = build_rep("so3: R3 + R3").unwrap();
    let p = rep.parse_point("e1; e2").unwrap();
    let cfg = SearchConfig::for_rep(&rep, 3).with_starts(120);
    let inv = find_critical_set(&rep, &p, &HeightSpec::height(p.clone()), &cfg).unwrap();
    // h(g) = g₁₁ + g₂₂: the identity, the half-turn about e3 and the circle
    // of half-turns about axes in the e1e2-plane
    assert_eq!(inv.dimension_profile(), vec![(0, 2), (1, 1)]);
    // SO(3) = RP3 has Z₂ Betti sum 4
    assert_eq!(inv.total_betti_sum, 4);
}

#[test]
fn orbit_dimensions() {
    let rep = build_rep("so3: R3 + R3").unwrap();
    let chart = orbit_chart(&rep, &rep.parse_point("e1; e2").unwrap()).unwrap();
    assert_eq!((chart.orbit_dim, chart.isotropy_dim), (3, 0));
    let chart = orbit_chart(&rep, &rep.parse_point("e1; 0").unwrap()).unwrap();
    assert_eq!((chart.orbit_dim, chart.isotropy_dim), (2, 1));
    assert_eq!(chart.tangent_basis.ncols() + chart.normal_basis.ncols(), 6);

    assert_eq!(cohomogeneity(&rep, 10, 1).unwrap().value, 3);
    let g2 = build_rep("g2: R7 + R7").unwrap();
    assert_eq!(cohomogeneity(&g2, 10, 1).unwrap().value, 3);
}

#[test]
fn transitive_sphere_actions_span_the_space() {
    // the orbit is the round sphere, so its span has codimension zero
    for (spec, point) in [("su2: C2", "1"), ("so3: R3", "e1"), ("spin7: R8", "1")] {
        let rep = build_rep(spec).unwrap();
        let p = rep.parse_point(point).unwrap();
        let span = substantial_span(&rep, &p, 4 * rep.dim() + 8, 11).unwrap();
        let orbit = orbit_chart(&rep, &p).unwrap().orbit_dim;
        assert_eq!(span, rep.dim(), "{spec}");
        assert_eq!(span - 1 - orbit, 0, "{spec}");
    }
}
