use polycover::exact_geom::{
    line_intersect, orientation, ray_intersect, segment_intersect, ExactPoint, Intersection, Rational, Ray, Segment,
};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..6).prop_map(|(n, d)| Rational::frac(n, d))
}

fn point() -> impl Strategy<Value = ExactPoint> {
    (coord(), coord()).prop_map(|(x, y)| ExactPoint::new(x, y))
}

fn segment() -> impl Strategy<Value = Segment> {
    (point(), point())
        .prop_filter("distinct endpoints", |(p, q)| p != q)
        .prop_map(|(p, q)| Segment::new(p, q).unwrap())
}

fn ray() -> impl Strategy<Value = Ray> {
    (point(), coord(), coord())
        .prop_filter("non-zero direction", |(_, dx, dy)| !dx.is_zero() || !dy.is_zero())
        .prop_map(|(o, dx, dy)| Ray::new(o, dx, dy).unwrap())
}

fn same_shape(a: &Intersection, b: &Intersection) -> bool {
    match (a, b) {
        (Intersection::Empty, Intersection::Empty) => true,
        (Intersection::Point(p), Intersection::Point(q)) => p == q,
        (Intersection::Overlap(s), Intersection::Overlap(t)) => {
            (s.p() == t.p() && s.q() == t.q()) || (s.p() == t.q() && s.q() == t.p())
        }
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn orientation_matches_float_when_far_from_zero(a in point(), b in point(), c in point()) {
        let (ax, ay) = a.to_f64();
        let (bx, by) = b.to_f64();
        let (cx, cy) = c.to_f64();
        let cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
        prop_assume!(cross.abs() > 1e-6);
        prop_assert_eq!(orientation(&a, &b, &c), if cross > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn segment_intersection_is_symmetric(s in segment(), t in segment()) {
        prop_assert!(same_shape(&segment_intersect(&s, &t), &segment_intersect(&t, &s)));
    }

    #[test]
    fn ray_hit_is_the_line_point_with_nonnegative_parameters(r in ray(), s in ray()) {
        let line = line_intersect(&r, &s);
        match ray_intersect(&r, &s) {
            Intersection::Point(p) => {
                match line {
                    Intersection::Point(q) => {
                        prop_assert_eq!(&p, &q);
                        prop_assert!(r.param_of(&p) >= Rational::zero());
                        prop_assert!(s.param_of(&p) >= Rational::zero());
                    }
                    // Collinear rays touching in one point.
                    _ => prop_assert!(orientation(r.origin(), &r.point_at(&Rational::one()), s.origin()) == 0),
                }
            }
            Intersection::Empty => {
                if let Intersection::Point(q) = line {
                    let behind = r.param_of(&q) < Rational::zero() || s.param_of(&q) < Rational::zero();
                    prop_assert!(behind);
                }
            }
            _ => {}
        }
    }

    #[test]
    fn point_intersections_lie_on_both_segments(s in segment(), t in segment()) {
        if let Intersection::Point(p) = segment_intersect(&s, &t) {
            prop_assert_eq!(orientation(s.p(), s.q(), &p), 0);
            prop_assert_eq!(orientation(t.p(), t.q(), &p), 0);
            let u = s.param_of(&p);
            prop_assert!(u >= Rational::zero() && u <= Rational::one());
        }
    }
}

#[test]
fn degenerate_inputs_are_exact() {
    let a = ExactPoint::from_ints(0, 0);
    let b = ExactPoint::from_ints(3, 1);
    let third = Rational::frac(1, 3);
    let c = ExactPoint::new(Rational::from(1), third);
    assert_eq!(orientation(&a, &b, &c), 0);
    let s = Segment::new(a.clone(), b.clone()).unwrap();
    let t = Segment::new(c.clone(), ExactPoint::from_ints(1, 5)).unwrap();
    assert!(matches!(segment_intersect(&s, &t), Intersection::Point(p) if p == c));
}
