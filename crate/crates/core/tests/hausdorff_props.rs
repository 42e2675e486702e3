use polycover::cover_solver::Polyline;
use polycover::curve_simplify::{directed_hausdorff_leq, Arrangement};
use polycover::exact_geom::{segment_contains, ExactPoint, Rational, Segment};
use proptest::prelude::*;

fn polyline(max_len: usize) -> impl Strategy<Value = Polyline> {
    prop::collection::vec((-6i64..7, -6i64..7), 2..=max_len)
        .prop_map(|pts| {
            let mut v: Vec<ExactPoint> = pts.into_iter().map(|(x, y)| ExactPoint::from_ints(x, y)).collect();
            v.dedup();
            v
        })
        .prop_filter("two distinct vertices", |v| v.len() >= 2)
        .prop_map(|v| Polyline::new(v).unwrap())
}

fn delta() -> impl Strategy<Value = Rational> {
    (0i64..40, 1i64..8).prop_map(|(n, d)| Rational::frac(n, d))
}

/// Containment oracle: cut `P` and `Q` in their common arrangement, then
/// every piece of `P` must lie inside some link of `Q`.
fn contained(p: &Polyline, q: &Polyline) -> bool {
    let mut all = p.links();
    all.extend(q.links());
    let arr = Arrangement::new(&all);
    let q_links = q.links();
    let p_links = p.links();
    arr.edges.iter().all(|&(a, b)| {
        let piece = Segment::new(arr.vertices[a].clone(), arr.vertices[b].clone()).unwrap();
        let from_p = p_links.iter().any(|l| segment_contains(l, &piece));
        !from_p || q_links.iter().any(|l| segment_contains(l, &piece))
    })
}

/// Dense-sampling estimate of the directed distance.
fn sampled(p: &Polyline, q: &Polyline, per_link: usize) -> f64 {
    let qv: Vec<(f64, f64)> = q.vertices().iter().map(|v| v.to_f64()).collect();
    let mut worst: f64 = 0.0;
    for w in p.vertices().windows(2) {
        let (a, b) = (w[0].to_f64(), w[1].to_f64());
        for i in 0..=per_link {
            let t = i as f64 / per_link as f64;
            let x = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            let d = qv
                .windows(2)
                .map(|s| {
                    let (c, e) = (s[0], s[1]);
                    let (ux, uy) = (e.0 - c.0, e.1 - c.1);
                    let u = (((x.0 - c.0) * ux + (x.1 - c.1) * uy) / (ux * ux + uy * uy)).clamp(0.0, 1.0);
                    (x.0 - c.0 - u * ux).hypot(x.1 - c.1 - u * uy)
                })
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn zero_tolerance_is_containment(p in polyline(4), q in polyline(5)) {
        prop_assert_eq!(directed_hausdorff_leq(&p, &q, &Rational::zero()), contained(&p, &q));
    }

    #[test]
    fn sub_polylines_are_contained(q in polyline(6), cut in 0usize..5) {
        let v = q.vertices();
        let i = cut % (v.len() - 1);
        let half = Rational::frac(1, 2);
        let mid = ExactPoint::new((&v[i].x + &v[i + 1].x) * &half, (&v[i].y + &v[i + 1].y) * &half);
        let p = Polyline::new(vec![v[i].clone(), mid]).unwrap();
        prop_assert!(directed_hausdorff_leq(&p, &q, &Rational::zero()));
    }

    #[test]
    fn monotone_in_tolerance(p in polyline(4), q in polyline(4), d in delta(), extra in delta()) {
        if directed_hausdorff_leq(&p, &q, &d) {
            prop_assert!(directed_hausdorff_leq(&p, &q, &(&d + &extra)));
        }
    }

    #[test]
    fn agrees_with_sampling_away_from_the_threshold(p in polyline(4), q in polyline(4), d in delta()) {
        let per_link = 2000;
        let longest = p.links().iter().map(|l| l.len2().to_f64().sqrt()).fold(0.0, f64::max);
        let resolution = longest / per_link as f64;
        let est = sampled(&p, &q, per_link);
        let df = d.to_f64();
        prop_assume!((est - df).abs() > 10.0 * resolution);
        prop_assert_eq!(directed_hausdorff_leq(&p, &q, &d), est <= df);
    }
}
