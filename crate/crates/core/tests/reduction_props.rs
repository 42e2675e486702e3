use polycover::chord_graph::{intersection_graph, ChordDiagram, Graph};
use polycover::cover_solver::{solve_cover, solve_cover_exhaustive, verify_cover, CoverWitness, Polyline};
use polycover::curve_simplify::{build_dcs_instance, half_safe_delta_for, SimplificationInstance};
use polycover::exact_geom::Rational;
use polycover::needle_reduce::{
    build_cover_instance, check_general_position, connectivity_check, validate_epsilon, CoverInstance,
};
use polycover::ray_embed::{embed, ray_graph, RayEmbedding};
use proptest::prelude::*;

fn diagram(max_n: usize) -> impl Strategy<Value = ChordDiagram> {
    (1..=max_n)
        .prop_flat_map(|n| Just((1..=n).flat_map(|l| [l, l]).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|order| ChordDiagram::new(order).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_preserves_the_circle_graph(d in diagram(7), s in 0usize..14) {
        let start = s % (2 * d.n()) + 1;
        let e = embed(&d, start).unwrap();
        prop_assert_eq!(ray_graph(&e), intersection_graph(&d));
    }

    #[test]
    fn rotation_keeps_the_circle_graph(d in diagram(7), k in 0usize..14) {
        prop_assert_eq!(intersection_graph(&d.rotated(k)), intersection_graph(&d));
    }

    #[test]
    fn reduced_instances_are_well_formed(d in diagram(5)) {
        let ci = build_cover_instance(&embed(&d, 1).unwrap()).unwrap();
        prop_assert_eq!(ci.m(), 2 * d.n() + 3);
        prop_assert_eq!(ci.k(), ci.m());
        prop_assert!(connectivity_check(&ci));
        prop_assert!(check_general_position(&ci).is_none());
        prop_assert!(validate_epsilon(&ci));
    }

    #[test]
    fn text_formats_round_trip(d in diagram(4)) {
        prop_assert_eq!(d.to_string().parse::<ChordDiagram>().unwrap(), d.clone());
        let g = intersection_graph(&d);
        prop_assert_eq!(g.to_string().parse::<Graph>().unwrap(), g);
        let e = embed(&d, 1).unwrap();
        prop_assert_eq!(e.to_string().parse::<RayEmbedding>().unwrap().to_string(), e.to_string());
        let ci = build_cover_instance(&e).unwrap();
        prop_assert_eq!(ci.to_string().parse::<CoverInstance>().unwrap(), ci.clone());
        let si = build_dcs_instance(&ci, &half_safe_delta_for(d.n())).unwrap();
        prop_assert_eq!(si.to_string().parse::<SimplificationInstance>().unwrap(), si.clone());
        prop_assert_eq!(si.input.to_string().parse::<Polyline>().unwrap(), si.input.clone());
        if let Some(w) = solve_cover(&ci).unwrap() {
            prop_assert_eq!(w.to_string().parse::<CoverWitness>().unwrap(), w.clone());
            prop_assert!(verify_cover(&ci, &w.polyline));
        }
    }

    #[test]
    fn structured_and_exhaustive_search_agree(d in diagram(3)) {
        let ci = build_cover_instance(&embed(&d, 1).unwrap()).unwrap();
        let fast = solve_cover(&ci).unwrap().map(|w| w.polyline.link_count());
        let slow = solve_cover_exhaustive(&ci).unwrap().map(|w| w.polyline.link_count());
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn dcs_input_size_is_polynomial(d in diagram(4)) {
        let ci = build_cover_instance(&embed(&d, 1).unwrap()).unwrap();
        let si = build_dcs_instance(&ci, &Rational::zero()).unwrap();
        let m = ci.m();
        prop_assert!(si.input.vertices().len() <= 2 * m * (m + 1));
    }
}
