use std::f64::consts::PI;

use incompat::graph::{
    are_isomorphic, check_transitivity, f2_rank, gen_family, line_graph, twin_reduce,
};
use incompat::invariants::{
    chromatic_number, clique_number, fractional_chromatic, independence_number, lovasz_theta,
};
use incompat::linalg::{CMatrix, Matrix};
use incompat::realization::{
    anticommutativity_graph, realize_line, realize_majorana, realize_minimal, sign_rule_graph,
};
use incompat::robustness::{
    bounds_report, eta_exact_sdp, eta_line_skew, eta_upper_signing, BoundsOptions,
};
use incompat::sdp::{solve, BlockKind, Entry, SdpOptions, SdpProblem};
use incompat::spectral::{
    find_weighing_orientation, graph_energy, matrix_certificates, max_skew_energy, skew_energy,
    switching_classes, Orientation,
};
use incompat::{Caps, Family, Graph};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut it = bits.into_iter();
            Graph::from_adjacency(n, |_, _| it.next().unwrap())
        })
    })
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop_oneof![
        (3usize..=9).prop_map(|n| Family::Cycle { n }),
        (2usize..=9).prop_map(|n| Family::Path { n }),
        (2usize..=7).prop_map(|n| Family::Complete { n }),
        (1usize..=3, 1usize..=3).prop_map(|(r, s)| Family::CompleteBipartite { r, s }),
        (2usize..=3).prop_map(|d| Family::Hypercube { d }),
        (4usize..=5).prop_map(|n| Family::Johnson { n, k: 2 }),
        (2usize..=3, 2usize..=3).prop_map(|(r, s)| Family::Rook { r, s }),
    ]
}

fn fam(f: &Family) -> Graph {
    gen_family(f).unwrap()
}

/// Neighbourhood-based twin test, written independently of `twin_reduce`.
fn has_twins(g: &Graph) -> bool {
    (0..g.n())
        .any(|u| (u + 1..g.n()).any(|v| (0..g.n()).all(|w| g.has_edge(u, w) == g.has_edge(v, w))))
}

fn cmat_close(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
    a.sub(b).max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn line_graph_degree_law(g in graph_strategy(9)) {
        let (lg, labels) = line_graph(&g);
        prop_assert_eq!(lg.n(), g.m());
        for i in 0..lg.n() {
            let (u, v) = labels.root_edges[i];
            prop_assert_eq!(lg.degree(i), g.degree(u) + g.degree(v) - 2);
        }
    }

    #[test]
    fn twin_reduction_is_idempotent(g in graph_strategy(10), pick in any::<prop::sample::Index>()) {
        let once = twin_reduce(&g);
        prop_assert!(!has_twins(&once.graph));
        let twice = twin_reduce(&once.graph);
        prop_assert_eq!(&twice.graph, &once.graph);
        // add a twin of some vertex and reduce again
        let n = g.n();
        let v = pick.index(n);
        let grown = Graph::from_adjacency(n + 1, |a, b| {
            let map = |x: usize| if x == n { v } else { x };
            let (a2, b2) = (map(a), map(b));
            a2 != b2 && g.has_edge(a2, b2)
        });
        prop_assert!(are_isomorphic(&twin_reduce(&grown).graph, &once.graph));
    }

    #[test]
    fn f2_rank_is_even(g in graph_strategy(12)) {
        prop_assert_eq!(f2_rank(&g) % 2, 0);
    }

    #[test]
    fn majorana_and_minimal_round_trip(g in graph_strategy(10)) {
        let caps = Caps::default();
        let a = realize_majorana(&g).unwrap();
        prop_assert!(a.monomials().iter().all(|m| m.degree() % 2 == 0));
        let b = realize_minimal(&g, &caps).unwrap();
        // twins (and isolated vertices) may share a monomial, which the strict graph rejects
        for obs in [&a, &b] {
            prop_assert_eq!(&sign_rule_graph(obs), &g);
            if obs.find_duplicate().is_none() {
                prop_assert_eq!(&anticommutativity_graph(obs).unwrap(), &g);
            }
        }
    }

    #[test]
    fn realized_matrices_match_the_symbolic_rule(g in graph_strategy(6)) {
        let caps = Caps::default();
        let obs = realize_minimal(&g, &caps).unwrap();
        prop_assume!(obs.dimension() <= 64);
        let mats = obs.matrices::<f64>(caps.max_qubits).unwrap();
        let id = CMatrix::identity(obs.dimension());
        for a in &mats {
            prop_assert!(cmat_close(a, &a.adjoint()) <= 1e-12);
            prop_assert!(cmat_close(&a.matmul(a), &id) <= 1e-12);
        }
        for u in 0..mats.len() {
            for v in u + 1..mats.len() {
                let ab = mats[u].matmul(&mats[v]);
                let ba = mats[v].matmul(&mats[u]);
                let anti = ab.add(&ba).max_abs() <= 1e-10;
                let comm = ab.sub(&ba).max_abs() <= 1e-10;
                prop_assert_eq!(anti, g.has_edge(u, v));
                prop_assert_eq!(comm, !g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn signing_is_realization_independent(g in graph_strategy(7)) {
        let caps = Caps::default();
        let majorana = realize_majorana(&g).unwrap();
        // dense incidence realizations get large quickly
        prop_assume!(majorana.qubit_count() <= 6);
        let a = eta_upper_signing::<f64>(&majorana, &caps).unwrap();
        let b = eta_upper_signing::<f64>(&realize_minimal(&g, &caps).unwrap(), &caps).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-9);
    }

    #[test]
    fn skew_spectrum_and_switching(g in graph_strategy(8), signs in proptest::collection::vec(any::<bool>(), 28), flips in proptest::collection::vec(any::<bool>(), 8)) {
        let sig: Vec<i8> = (0..g.m()).map(|i| if signs[i] { 1 } else { -1 }).collect();
        let o = Orientation::new(g.clone(), sig).unwrap();
        let s = o.skew_matrix::<f64>();
        // eigenvalues of S are ±iσ with σ the singular values
        let sv = s.singular_values();
        let sq: f64 = sv.iter().map(|x| x * x).sum();
        prop_assert!((sq - 2.0 * g.m() as f64).abs() <= 1e-9 * (1.0 + 2.0 * g.m() as f64));
        let e = skew_energy::<f64>(&o);
        prop_assert!((e - sv.iter().sum::<f64>()).abs() <= 1e-9 * (1.0 + e));
        let d = Matrix::from_fn(g.n(), g.n(), |i, j| if i != j { 0.0 } else if flips[i] { -1.0 } else { 1.0 });
        let switched = d.matmul(&s).matmul(&d);
        let e2: f64 = switched.singular_values().iter().sum();
        prop_assert!((e - e2).abs() <= 1e-9 * (1.0 + e));
        let via_api = skew_energy::<f64>(&o.switched(&flips[..g.n()]));
        prop_assert!((e - via_api).abs() <= 1e-9 * (1.0 + e));
    }

    #[test]
    fn max_skew_energy_chain(g in graph_strategy(8)) {
        prop_assume!(g.is_connected());
        let caps = Caps::default();
        let (e, _) = max_skew_energy::<f64>(&g, &caps).unwrap();
        let (n, m, delta) = (g.n() as f64, g.m() as f64, g.max_degree() as f64);
        prop_assert!(e <= (2.0 * m * n).sqrt() + 1e-9);
        prop_assert!((2.0 * m * n).sqrt() <= n * delta.sqrt() + 1e-9);
    }

    #[test]
    fn invariant_sandwich(g in graph_strategy(11)) {
        let caps = Caps::default();
        let alpha = independence_number(&g, &caps).unwrap();
        let theta = lovasz_theta::<f64>(&g, &caps).unwrap();
        let cover = chromatic_number(&g.complement(), &caps).unwrap();
        prop_assert!(alpha as f64 <= theta.value + 1e-6);
        prop_assert!(theta.value <= cover as f64 + 1e-6);
        prop_assert!(theta.lower <= theta.upper);
        prop_assert_eq!(clique_number(&g, &caps).unwrap(), independence_number(&g.complement(), &caps).unwrap());
        let chi_f = fractional_chromatic(&g, &caps).unwrap();
        let chi = chromatic_number(&g, &caps).unwrap() as f64;
        prop_assert!(alpha as f64 * chi_f.value >= g.n() as f64 - 1e-6);
        prop_assert!(chi_f.value <= chi + 1e-6);
        if let Some(c) = &chi_f.coloring {
            prop_assert!(c.is_valid_for(&g));
        }
    }

    #[test]
    fn lovasz_is_label_invariant(g in graph_strategy(9), perm in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
        // a relabelling is an orthogonal change of basis of the SDP block
        let caps = Caps::default();
        let p: Vec<usize> = perm.into_iter().filter(|&v| v < g.n()).collect();
        let h = Graph::from_adjacency(g.n(), |a, b| g.has_edge(p[a], p[b]));
        let a = lovasz_theta::<f64>(&g, &caps).unwrap();
        let b = lovasz_theta::<f64>(&h, &caps).unwrap();
        prop_assert!((a.value - b.value).abs() <= 2e-6);
    }

    #[test]
    fn minimum_eigenvalue_sdp(vals in proptest::collection::vec(-3.0f64..3.0, 15)) {
        // min ⟨C,X⟩ over density matrices is the smallest eigenvalue of C
        let n = 5;
        let mut it = vals.into_iter();
        let mut c = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = it.next().unwrap();
                c[(i, j)] = v;
                c[(j, i)] = v;
            }
        }
        let mut p = SdpProblem::new();
        let b = p.add_block(n, BlockKind::Real);
        for i in 0..n {
            for j in i..n {
                p.add_objective(Entry::real(b, i, j, c[(i, j)]));
            }
        }
        p.add_constraint((0..n).map(|i| Entry::real(b, i, i, 1.0)).collect(), 1.0);
        let sol = solve(&p, &SdpOptions::default(), &Caps::default()).unwrap();
        prop_assert!(sol.is_optimal());
        let lmin = c.sym_eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        prop_assert!((sol.primal_value - lmin).abs() <= 1e-6);
        prop_assert!(sol.dual_value <= sol.primal_value + 1e-8 * (1.0 + lmin.abs()));
    }

    #[test]
    fn line_signing_equals_skew_bound(root in graph_strategy(6)) {
        prop_assume!(root.is_connected() && root.m() >= 1 && root.m() <= 10);
        let caps = Caps::default();
        let obs = realize_line(&root).unwrap();
        let s = eta_upper_signing::<f64>(&obs, &caps).unwrap();
        let (e, _) = max_skew_energy::<f64>(&root, &caps).unwrap();
        prop_assert!((s.value - e / (2.0 * root.m() as f64)).abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bounds_reports_are_sound(f in family_strategy()) {
        let g = fam(&f);
        let r = bounds_report(&g, &BoundsOptions::default(), &Caps::default());
        prop_assert!(r.consistent);
        let lowers: Vec<f64> = r.records().filter(|x| x.is_lower()).map(|x| x.value).collect();
        let uppers: Vec<f64> = r.records().filter(|x| x.is_upper()).map(|x| x.value).collect();
        for &lo in &lowers {
            for &up in &uppers {
                prop_assert!(lo <= up + 1e-6, "{lo} > {up}");
            }
        }
        if let Some(e) = r.exact {
            prop_assert!(r.lower - 1e-6 <= e && e <= r.upper + 1e-6);
        }
    }

    #[test]
    fn exact_sdp_properties(g in graph_strategy(4)) {
        let caps = Caps::default();
        let m = eta_exact_sdp::<f64>(&realize_minimal(&g, &caps).unwrap(), &caps).unwrap();
        prop_assert!(m.residuals.is_valid(), "{:?}", m.residuals);
        let j = eta_exact_sdp::<f64>(&realize_majorana(&g).unwrap(), &caps).unwrap();
        prop_assert!(j.residuals.is_valid(), "{:?}", j.residuals);
        prop_assert!((m.value - j.value).abs() <= 1e-4);
        // deleting an observable cannot make the rest less compatible
        for v in 0..g.n() {
            let h = g.remove_vertex(v);
            if h.n() == 0 {
                continue;
            }
            let sub = eta_exact_sdp::<f64>(&realize_minimal(&h, &caps).unwrap(), &caps).unwrap();
            prop_assert!(m.value <= sub.value + 1e-4);
        }
    }
}

#[test]
fn exact_sdp_five_vertices_across_realizations() {
    let caps = Caps {
        max_joint_sdp: 1 << 16,
        ..Caps::default()
    };
    for g in [fam(&Family::Cycle { n: 5 }), fam(&Family::Path { n: 5 })] {
        let a = eta_exact_sdp::<f64>(&realize_minimal(&g, &caps).unwrap(), &caps).unwrap();
        let b = eta_exact_sdp::<f64>(&realize_majorana(&g).unwrap(), &caps).unwrap();
        assert!(
            (a.value - b.value).abs() <= 1e-4,
            "{} vs {}",
            a.value,
            b.value
        );
    }
}

#[test]
fn f2_rank_of_complete_graphs() {
    for n in 1..=10 {
        assert_eq!(f2_rank(&fam(&Family::Complete { n })), n - n % 2);
    }
}

#[test]
fn transitivity_flags_match_the_checker() {
    let caps = Caps::default();
    let families = [
        Family::Cycle { n: 7 },
        Family::Path { n: 6 },
        Family::Complete { n: 6 },
        Family::CompleteBipartite { r: 2, s: 3 },
        Family::CompleteBipartite { r: 3, s: 3 },
        Family::Hypercube { d: 3 },
        Family::Johnson { n: 5, k: 2 },
        Family::MergedJohnson {
            n: 5,
            k: 2,
            l: vec![1],
        },
        Family::Rook { r: 3, s: 4 },
    ];
    for f in families {
        let g = fam(&f);
        let t = check_transitivity(&g, caps.max_transitivity_vertices).unwrap();
        let meta = g.meta().unwrap();
        if let Some(vt) = meta.vertex_transitive {
            assert_eq!(vt, t.vertex_transitive, "{f:?}");
        }
        if let Some(et) = meta.edge_transitive {
            assert_eq!(et, t.edge_transitive, "{f:?}");
        }
    }
}

#[test]
fn rook_graphs_are_line_graphs_of_complete_bipartite_graphs() {
    for r in 1..=4 {
        for s in 1..=4 {
            let kr = fam(&Family::Complete { n: r });
            let ks = fam(&Family::Complete { n: s });
            let (l, _) = line_graph(&fam(&Family::CompleteBipartite { r, s }));
            assert!(are_isomorphic(&kr.cartesian_product(&ks), &l), "{r}x{s}");
        }
    }
}

#[test]
fn bipartite_families_attain_graph_energy() {
    let caps = Caps::default();
    let families = [
        Family::Path { n: 6 },
        Family::Cycle { n: 8 },
        Family::CompleteBipartite { r: 3, s: 3 },
        Family::Hypercube { d: 3 },
    ];
    for f in families {
        let g = fam(&f);
        let e = graph_energy::<f64>(&g);
        let classes = switching_classes(&g, &caps).unwrap();
        assert!(
            classes
                .iter()
                .any(|o| (skew_energy::<f64>(&o) - e).abs() <= 1e-9),
            "{f:?}"
        );
    }
}

#[test]
fn weighing_certificates_match_maximal_energy() {
    let caps = Caps::default();
    let families = [
        Family::Complete { n: 4 },
        Family::Complete { n: 5 },
        Family::Cycle { n: 4 },
        Family::Cycle { n: 5 },
        Family::Hypercube { d: 3 },
        Family::CompleteBipartite { r: 2, s: 3 },
        Family::CompleteBipartite { r: 3, s: 3 },
        Family::Rook { r: 2, s: 3 },
    ];
    for f in families {
        let g = fam(&f);
        let (e, witness) = max_skew_energy::<f64>(&g, &caps).unwrap();
        let delta = g.max_degree();
        let attains = (e - g.n() as f64 * (delta as f64).sqrt()).abs() <= 1e-9;
        let weighing = find_weighing_orientation(&g, delta, &caps).unwrap();
        assert_eq!(attains, weighing.is_some(), "{f:?}");
        if attains {
            let cert = matrix_certificates(&witness.skew_integer_matrix()).unwrap();
            assert_eq!(cert.weighing, Some(delta as i64), "{f:?}");
        }
    }
}

#[test]
fn cycle_values_approach_two_over_pi() {
    let caps = Caps::default();
    let mut odd = vec![];
    let mut even = vec![];
    for n in 3..=12 {
        let v = eta_line_skew(&fam(&Family::Cycle { n }), &caps)
            .unwrap()
            .value;
        let x = n as f64;
        let formula = if n % 2 == 1 {
            1.0 / (x * (PI / (2.0 * x)).tan())
        } else {
            2.0 / (x * (PI / x).sin())
        };
        assert!((v - formula).abs() <= 1e-9);
        // leading correction π/(3n²) plus the next order of the expansion
        assert!(
            (v - 2.0 / PI).abs() <= PI / (3.0 * x * x) + 2.0 / x.powi(4),
            "C_{n}"
        );
        if n % 2 == 1 {
            odd.push(v)
        } else {
            even.push(v)
        }
    }
    assert!(odd.windows(2).all(|w| w[1] > w[0]));
    assert!(even.windows(2).all(|w| w[1] < w[0]));
}
