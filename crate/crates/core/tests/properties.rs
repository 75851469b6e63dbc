use proptest::prelude::*;

use ttcur_core::circuit::cyclic_reduce;
use ttcur_core::currents::{distance, rational_current};
use ttcur_core::dynamics::{bcc_estimate, cancellation, goodness, PackedConfig, PackedIterator};
use ttcur_core::examples::*;
use ttcur_core::map::DEFAULT_WORD_CAP;
use ttcur_core::path::{inverse_edges, reduce_edges};
use ttcur_core::{Circuit, Edge, EdgePath, Graph, GraphMap};

fn word(rank: usize, max: usize) -> impl Strategy<Value = Vec<Edge>> {
    proptest::collection::vec(0..2 * rank, 1..=max)
        .prop_map(|ids| reduce_edges(&ids.into_iter().map(Edge::from_id).collect::<Vec<_>>()))
}

fn circuit(g: &Graph, w: &[Edge]) -> Option<Circuit> {
    if w.is_empty() {
        return None;
    }
    cyclic_reduce(g, &EdgePath::new(w.to_vec()))
        .ok()
        .map(|(c, _)| c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_idempotent(ids in proptest::collection::vec(0usize..6, 0..40)) {
        let w: Vec<Edge> = ids.into_iter().map(Edge::from_id).collect();
        let r = reduce_edges(&w);
        prop_assert_eq!(reduce_edges(&r), r.clone());
        let mut ww = r.clone();
        ww.extend(inverse_edges(&r));
        prop_assert!(reduce_edges(&ww).is_empty());
    }

    #[test]
    fn rational_currents_are_currents(w in word(3, 30), depth in 1usize..5) {
        let g = Graph::rose(&["a", "b", "c"]);
        if let Some(c) = circuit(&g, &w) {
            let ws = rational_current(&c, depth);
            prop_assert_eq!(ws.flip_residual(), 0.0);
            prop_assert_eq!(ws.switch_residual(), 0.0);
            prop_assert_eq!(ws.weight(), c.len() as f64);
        }
    }

    #[test]
    fn currents_and_goodness_ignore_rotation(w in word(2, 30), shift in 0usize..30, k in 0usize..4) {
        let (_, f2) = fibonacci().normalize_power().unwrap();
        let g = f2.graph();
        if let Some(c) = circuit(g, &w) {
            let root = c.word();
            let s = shift % root.len();
            let mut rotated = root[s..].to_vec();
            rotated.extend_from_slice(&root[..s]);
            let d = Circuit::from_cyclic(&rotated, 1);
            prop_assert_eq!(rational_current(&c, 3), rational_current(&d, 3));
            prop_assert_eq!(goodness(&f2, k, &c).unwrap().good_edges, goodness(&f2, k, &d).unwrap().good_edges);
        }
    }

    #[test]
    fn illegal_turns_never_increase(w in word(3, 16)) {
        let f = plastic();
        let table = f.legality();
        if let Some(mut c) = circuit(f.graph(), &w) {
            let mut ilt = table.illegal_turn_count(&c);
            for _ in 0..12 {
                c = f.iterate_circuit(&c, 1, DEFAULT_WORD_CAP).unwrap();
                let next = table.illegal_turn_count(&c);
                prop_assert!(next <= ilt);
                ilt = next;
            }
        }
    }

    #[test]
    fn application_composes(w in word(3, 20)) {
        let (f, g) = (plastic(), tribonacci());
        let fg = f.compose(&g).unwrap();
        let p = EdgePath::new(w);
        prop_assert_eq!(fg.apply(&p), f.apply(&g.apply(&p)));
        let id = plastic().compose(&plastic_inverse()).unwrap();
        prop_assert_eq!(id.apply(&p), p);
    }

    #[test]
    fn distance_is_a_pseudometric(x in word(2, 20), y in word(2, 20), z in word(2, 20)) {
        let g = Graph::rose(&["a", "b"]);
        if let (Some(a), Some(b), Some(c)) = (circuit(&g, &x), circuit(&g, &y), circuit(&g, &z)) {
            let (a, b, c) = (rational_current(&a, 3), rational_current(&b, 3), rational_current(&c, 3));
            let ab = distance(&a, &b, 3).unwrap();
            prop_assert_eq!(ab, distance(&b, &a, 3).unwrap());
            prop_assert!(ab <= distance(&a, &c, 3).unwrap() + distance(&c, &b, 3).unwrap() + 1e-15);
        }
    }

    #[test]
    fn packed_iteration_agrees_with_words(w in word(3, 14)) {
        let (_, f) = plastic().normalize_power().unwrap();
        let head = 3 + 13 + 2;
        let config = PackedConfig { window: 3, head, explicit_max: 2 * head };
        if let Some(c0) = circuit(f.graph(), &w) {
            let mut it = PackedIterator::new(&f, config).unwrap();
            let mut pc = it.start(&c0).unwrap();
            let mut c = c0;
            for _ in 0..3 {
                pc = it.step(&pc).unwrap();
                c = f.iterate_circuit(&c, 1, DEFAULT_WORD_CAP).unwrap();
                prop_assert_eq!(pc.len(), c.len() as f64);
                prop_assert_eq!(it.weight_system(&pc, 3).unwrap(), rational_current(&c, 3).to_f64());
            }
        }
    }

    #[test]
    fn cancellation_respects_the_bound(x in word(3, 12), y in word(3, 12)) {
        let (_, f) = plastic().normalize_power().unwrap();
        let cf = bcc_estimate(&f, 6).configured_bound;
        if !x.is_empty() && !y.is_empty() && x[x.len() - 1] != y[0].inv() {
            prop_assert!(cancellation(&f, &x, &y) <= cf);
        }
    }
}

fn column_sum_check(f: &GraphMap) {
    let m = f.transition_matrix();
    for n in 0..=12u32 {
        let mn = m.checked_pow(n).unwrap();
        for e in f.graph().positive_edges() {
            let len = f
                .iterate(&EdgePath::single(e), n as usize, DEFAULT_WORD_CAP)
                .unwrap()
                .len() as u64;
            assert_eq!(len, mn.column_sums()[e.index()], "{} n={n}", f.name());
        }
    }
}

#[test]
fn train_track_lengths_are_column_sums() {
    for f in [fibonacci(), plastic(), tribonacci(), map_p()] {
        column_sum_check(&f);
    }
}
