use super::{ExactPoint, Rational, Ray, Segment};

/// Result of intersecting two linear objects. `Ray` and `Line` only arise
/// when collinear rays or lines overlap in an unbounded set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Point(ExactPoint),
    Overlap(Segment),
    Ray(Ray),
    Line(Ray),
}

impl Intersection {
    pub fn is_empty(&self) -> bool {
        matches!(self, Intersection::Empty)
    }

    pub fn point(&self) -> Option<&ExactPoint> {
        match self {
            Intersection::Point(p) => Some(p),
            _ => None,
        }
    }
}

fn cross(ax: &Rational, ay: &Rational, bx: &Rational, by: &Rational) -> Rational {
    ax * by - ay * bx
}

/// Sign of `(b − a) × (c − a)`.
pub fn orientation(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> i32 {
    let (ux, uy) = b.sub(a);
    let (vx, vy) = c.sub(a);
    cross(&ux, &uy, &vx, &vy).signum()
}

pub fn point_on_segment(p: &ExactPoint, s: &Segment) -> bool {
    if orientation(s.p(), s.q(), p) != 0 {
        return false;
    }
    let t = s.param_of(p);
    t >= 0 && t <= 1
}

pub fn segment_contains(outer: &Segment, inner: &Segment) -> bool {
    point_on_segment(inner.p(), outer) && point_on_segment(inner.q(), outer)
}

/// Max bit length over the four integers of the point's coordinates.
pub fn bit_length(p: &ExactPoint) -> u64 {
    p.x.bit_length().max(p.y.bit_length())
}

/// Parameter interval kind along a linear object.
#[derive(Clone, Copy)]
enum Extent {
    Segment,
    Ray,
    Line,
}

impl Extent {
    fn lo(self) -> Option<Rational> {
        match self {
            Extent::Line => None,
            _ => Some(Rational::zero()),
        }
    }

    fn hi(self) -> Option<Rational> {
        match self {
            Extent::Segment => Some(Rational::one()),
            _ => None,
        }
    }

    fn contains(self, t: &Rational) -> bool {
        match self {
            Extent::Segment => *t >= 0 && *t <= 1,
            Extent::Ray => *t >= 0,
            Extent::Line => true,
        }
    }
}

fn max_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (x, None) | (None, x) => x,
    }
}

fn min_opt(a: Option<Rational>, b: Option<Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (x, None) | (None, x) => x,
    }
}

/// Shared engine: object `i` is `o_i + t·d_i` with `t` restricted by `e_i`.
fn intersect(
    o1: &ExactPoint,
    d1: (&Rational, &Rational),
    e1: Extent,
    o2: &ExactPoint,
    d2: (&Rational, &Rational),
    e2: Extent,
) -> Intersection {
    let den = cross(d1.0, d1.1, d2.0, d2.1);
    let (wx, wy) = o2.sub(o1);
    if !den.is_zero() {
        let t = cross(&wx, &wy, d2.0, d2.1) / &den;
        let s = cross(&wx, &wy, d1.0, d1.1) / &den;
        if e1.contains(&t) && e2.contains(&s) {
            return Intersection::Point(ExactPoint::new(&o1.x + &(&t * d1.0), &o1.y + &(&t * d1.1)));
        }
        return Intersection::Empty;
    }
    if !cross(&wx, &wy, d1.0, d1.1).is_zero() {
        return Intersection::Empty;
    }
    // Collinear: express object 2's extent in object 1's parameter.
    let norm = d1.0.square() + d1.1.square();
    let at = |t: &Rational| ExactPoint::new(&o1.x + &(t * d1.0), &o1.y + &(t * d1.1));
    let s0 = (&wx * d1.0 + &wy * d1.1) / &norm;
    let scale = (d2.0 * d1.0 + d2.1 * d1.1) / &norm;
    let map = |s: Rational| &s0 + &(&s * &scale);
    let (mut lo2, mut hi2) = (e2.lo().map(map), e2.hi().map(map));
    if scale.signum() < 0 {
        // Direction reversal swaps which end of object 2 is bounded.
        std::mem::swap(&mut lo2, &mut hi2);
    }
    let lo = max_opt(e1.lo(), lo2);
    let hi = min_opt(e1.hi(), hi2);
    match (lo, hi) {
        (Some(lo), Some(hi)) => {
            if lo > hi {
                Intersection::Empty
            } else if lo == hi {
                Intersection::Point(at(&lo))
            } else {
                Intersection::Overlap(Segment::new(at(&lo), at(&hi)).expect("distinct parameters"))
            }
        }
        (Some(lo), None) => Intersection::Ray(Ray::new(at(&lo), d1.0.clone(), d1.1.clone()).expect("non-zero")),
        (None, Some(hi)) => Intersection::Ray(Ray::new(at(&hi), -d1.0, -d1.1).expect("non-zero")),
        (None, None) => Intersection::Line(Ray::new(o1.clone(), d1.0.clone(), d1.1.clone()).expect("non-zero")),
    }
}

pub fn segment_intersect(s1: &Segment, s2: &Segment) -> Intersection {
    let (d1x, d1y) = s1.direction();
    let (d2x, d2y) = s2.direction();
    intersect(
        s1.p(),
        (&d1x, &d1y),
        Extent::Segment,
        s2.p(),
        (&d2x, &d2y),
        Extent::Segment,
    )
}

pub fn ray_intersect(r1: &Ray, r2: &Ray) -> Intersection {
    intersect(
        r1.origin(),
        (r1.dx(), r1.dy()),
        Extent::Ray,
        r2.origin(),
        (r2.dx(), r2.dy()),
        Extent::Ray,
    )
}

/// Intersection of the two supporting lines.
pub fn line_intersect(r1: &Ray, r2: &Ray) -> Intersection {
    intersect(
        r1.origin(),
        (r1.dx(), r1.dy()),
        Extent::Line,
        r2.origin(),
        (r2.dx(), r2.dy()),
        Extent::Line,
    )
}

/// Intersection point of two supporting lines, or `None` when parallel.
pub fn line_point(r1: &Ray, r2: &Ray) -> Option<ExactPoint> {
    let den = cross(r1.dx(), r1.dy(), r2.dx(), r2.dy());
    if den.is_zero() {
        return None;
    }
    let (wx, wy) = r2.origin().sub(r1.origin());
    let t = cross(&wx, &wy, r2.dx(), r2.dy()) / den;
    Some(r1.point_at(&t))
}

/// Whether a ray and a segment share a point.
pub fn ray_segment_intersect(r: &Ray, s: &Segment) -> Intersection {
    let (dx, dy) = s.direction();
    intersect(
        r.origin(),
        (r.dx(), r.dy()),
        Extent::Ray,
        s.p(),
        (&dx, &dy),
        Extent::Segment,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> ExactPoint {
        ExactPoint::from_ints(x, y)
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(pt(a.0, a.1), pt(b.0, b.1)).unwrap()
    }

    fn ray(o: (i64, i64), d: (i64, i64)) -> Ray {
        Ray::new(pt(o.0, o.1), d.0.into(), d.1.into()).unwrap()
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orientation(&pt(0, 0), &pt(1, 0), &pt(0, 1)), 1);
        assert_eq!(orientation(&pt(0, 0), &pt(1, 1), &pt(2, 2)), 0);
        // 2·5 − 6·3 = −8
        assert_eq!(orientation(&pt(0, 0), &pt(2, 6), &pt(3, 5)), -1);
    }

    #[test]
    fn segment_cases() {
        assert_eq!(
            segment_intersect(&seg((0, 0), (2, 2)), &seg((0, 2), (2, 0))),
            Intersection::Point(pt(1, 1))
        );
        assert_eq!(
            segment_intersect(&seg((0, 0), (1, 0)), &seg((2, 0), (3, 0))),
            Intersection::Empty
        );
        assert_eq!(
            segment_intersect(&seg((0, 0), (2, 0)), &seg((1, 0), (3, 0))),
            Intersection::Overlap(seg((1, 0), (2, 0)))
        );
        assert_eq!(
            segment_intersect(&seg((0, 0), (2, 0)), &seg((3, 0), (2, 0))),
            Intersection::Point(pt(2, 0))
        );
        assert_eq!(
            segment_intersect(&seg((0, 0), (2, 0)), &seg((3, 0), (1, 0))),
            Intersection::Overlap(seg((1, 0), (2, 0)))
        );
    }

    #[test]
    fn ray_cases() {
        assert_eq!(
            ray_intersect(&ray((0, 0), (1, 0)), &ray((1, -1), (0, 1))),
            Intersection::Point(pt(1, 0))
        );
        assert_eq!(
            ray_intersect(&ray((0, 0), (1, 0)), &ray((0, 1), (1, 0))),
            Intersection::Empty
        );
        // y = 2x − 1 and y = 6x − 10 meet at (9/4, 7/2), ahead of both origins.
        let (a, b) = (ray((1, 1), (1, 2)), ray((2, 2), (1, 6)));
        let solved = ExactPoint::new(Rational::frac(9, 4), Rational::frac(7, 2));
        assert_eq!(ray_intersect(&a, &b), Intersection::Point(solved.clone()));
        assert_eq!(line_intersect(&a, &b), Intersection::Point(solved));
        // Reversing one direction puts the meeting point behind its origin.
        assert_eq!(ray_intersect(&a, &b.complement()), Intersection::Empty);
        // Lines meeting behind both origins.
        let (c, d) = (ray((1, 1), (1, 2)), ray((3, 2), (1, 1)));
        assert_eq!(ray_intersect(&c, &d), Intersection::Empty);
        assert_eq!(line_intersect(&c, &d), Intersection::Point(pt(0, -1)));
    }

    #[test]
    fn collinear_rays() {
        let a = ray((0, 0), (1, 0));
        assert_eq!(
            ray_intersect(&a, &ray((2, 0), (1, 0))),
            Intersection::Ray(ray((2, 0), (1, 0)))
        );
        assert_eq!(
            ray_intersect(&a, &ray((2, 0), (-1, 0))),
            Intersection::Overlap(seg((0, 0), (2, 0)))
        );
        assert_eq!(ray_intersect(&a, &ray((0, 0), (-1, 0))), Intersection::Point(pt(0, 0)));
        assert_eq!(ray_intersect(&a, &ray((-1, 0), (-1, 0))), Intersection::Empty);
        assert!(matches!(
            line_intersect(&a, &ray((5, 0), (-3, 0))),
            Intersection::Line(_)
        ));
    }

    #[test]
    fn containment() {
        assert!(point_on_segment(&pt(1, 1), &seg((0, 0), (2, 2))));
        assert!(!point_on_segment(&pt(3, 3), &seg((0, 0), (2, 2))));
        assert!(segment_contains(&seg((0, 0), (4, 0)), &seg((1, 0), (3, 0))));
        assert!(!segment_contains(&seg((1, 0), (3, 0)), &seg((0, 0), (4, 0))));
    }

    #[test]
    fn bit_lengths() {
        assert_eq!(bit_length(&pt(1, 1)), 1);
        assert_eq!(bit_length(&pt(5, 120)), 7);
        assert_eq!(bit_length(&pt(10, 3_628_800)), 22);
    }
}
