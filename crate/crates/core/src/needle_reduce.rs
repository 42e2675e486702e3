//! Needle construction: a ray embedding becomes a segment set whose
//! minimum covering polyline mirrors a Hamiltonian path of the ray graph.
//!
//! Each ray gets a needle, two segments meeting at an apex far below every
//! line-line intersection and opening up to `±ε` around the ray origin.
//! Three leading segments `h`, `v`, `t` force the start of a minimal cover:
//! `h` crosses all needles low down, `v` climbs on the left of every needle
//! and `t` runs above all origins back to `x = 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact_geom::{
    line_point, orientation, parse_points, point_on_segment, segment_intersect, ExactPoint, Intersection, Rational,
    Ray, Segment,
};
use crate::ray_embed::RayEmbedding;

pub const LEAD_H: usize = 0;
pub const LEAD_V: usize = 1;
pub const LEAD_T: usize = 2;

/// Maximum number of `ε` halvings before giving up.
pub const EPSILON_HALVINGS: u32 = 64;

/// Construction data kept alongside a reduced instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub y_min: Rational,
    pub y_l: Rational,
    pub y_h: Rational,
    pub y_top: Rational,
    pub x_v: Rational,
    pub epsilon: Rational,
    pub needles: Vec<NeedleRef>,
}

/// Chord label plus the segment indices of its needle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeedleRef {
    pub chord: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Needle {
    pub chord: usize,
    pub left: Segment,
    pub right: Segment,
    pub apex: ExactPoint,
}

impl Needle {
    /// The original ray origin, midway between the two upper endpoints.
    pub fn origin(&self) -> ExactPoint {
        let half = Rational::frac(1, 2);
        ExactPoint::new((&self.left.p().x + &self.right.p().x) * &half, self.left.p().y.clone())
    }

    /// The original ray, recovered as the line through apex and origin.
    pub fn ray(&self) -> Ray {
        let o = self.origin();
        let (dx, dy) = o.sub(&self.apex);
        Ray::new(o, dx, dy).expect("apex lies below the origin")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoverInstance {
    segments: Vec<Segment>,
    labels: Vec<String>,
    k: usize,
    reduction: Option<Reduction>,
}

impl CoverInstance {
    /// A plain instance with labels `s1, s2, …`.
    pub fn new(segments: Vec<Segment>, k: usize) -> Self {
        let labels = (1..=segments.len()).map(|i| format!("s{i}")).collect();
        CoverInstance {
            segments,
            labels,
            k,
            reduction: None,
        }
    }

    pub fn with_labels(segments: Vec<Segment>, labels: Vec<String>, k: usize) -> Result<Self> {
        if labels.len() != segments.len() {
            return Err(Error::Mismatch(format!(
                "{} labels for {} segments",
                labels.len(),
                segments.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(char::is_whitespace) || l.contains(['(', '#']) {
                return Err(Error::InvalidParameter(format!("bad segment label {l:?}")));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidParameter(format!("duplicate segment label {l:?}")));
            }
        }
        Ok(CoverInstance {
            segments,
            labels,
            k,
            reduction: None,
        })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.segments.len()
    }

    pub fn with_k(&self, k: usize) -> Self {
        CoverInstance { k, ..self.clone() }
    }

    pub fn reduction(&self) -> Option<&Reduction> {
        self.reduction.as_ref()
    }

    pub fn needles(&self) -> Vec<Needle> {
        let Some(r) = &self.reduction else {
            return Vec::new();
        };
        r.needles
            .iter()
            .map(|n| Needle {
                chord: n.chord,
                left: self.segments[n.left].clone(),
                right: self.segments[n.right].clone(),
                apex: self.segments[n.left].q().clone(),
            })
            .collect()
    }
}

pub fn build_cover_instance(e: &RayEmbedding) -> Result<CoverInstance> {
    build_cover_instance_with(e, &Rational::one())
}

/// Same construction with the apex line placed `depth` below the lowest
/// line-line intersection (the standard construction uses depth 1).
pub fn build_cover_instance_with(e: &RayEmbedding, depth: &Rational) -> Result<CoverInstance> {
    if e.n() == 0 {
        return Err(Error::InvalidDiagram("the reduction needs at least one chord".into()));
    }
    if depth.signum() <= 0 {
        return Err(Error::InvalidParameter(format!(
            "needle depth {depth} must be positive"
        )));
    }
    let rays = e.rays();
    let mut y_min = rays.iter().map(|r| r.origin().y.clone()).min().expect("non-empty");
    let y_top = rays.iter().map(|r| r.origin().y.clone()).max().expect("non-empty");
    for (i, r) in rays.iter().enumerate() {
        for s in &rays[i + 1..] {
            let x = line_point(r, s).ok_or_else(|| Error::NotGeneralPosition("parallel rays".into()))?;
            y_min = y_min.min(x.y);
        }
    }
    let y_l = &y_min - depth;
    let y_h = &y_min - &(depth * &Rational::frac(1, 2));
    let mut epsilon = Rational::frac(1, 4);
    for _ in 0..EPSILON_HALVINGS {
        let ci = assemble(e, &y_min, &y_l, &y_h, &y_top, &epsilon)?;
        if validate_epsilon(&ci) {
            return Ok(ci);
        }
        epsilon = epsilon * Rational::frac(1, 2);
    }
    Err(Error::EpsilonSearchExhausted(EPSILON_HALVINGS))
}

fn assemble(
    e: &RayEmbedding,
    y_min: &Rational,
    y_l: &Rational,
    y_h: &Rational,
    y_top: &Rational,
    epsilon: &Rational,
) -> Result<CoverInstance> {
    let mut needle_segs = Vec::new();
    let mut xs = Vec::new();
    for r in e.rays() {
        let o = r.origin();
        let apex = ExactPoint::new(r.x_at_y(y_l).expect("rays are not horizontal"), y_l.clone());
        let left = Segment::new(ExactPoint::new(&o.x - epsilon, o.y.clone()), apex.clone())?;
        let right = Segment::new(ExactPoint::new(&o.x + epsilon, o.y.clone()), apex)?;
        for s in [&left, &right] {
            xs.push(s.supporting_ray().x_at_y(y_h).expect("needles are not horizontal"));
        }
        needle_segs.push((left, right));
    }
    let x_lo = xs.iter().min().expect("non-empty").clone();
    let x_hi = xs.iter().max().expect("non-empty").clone();
    let x_v = &x_lo - &Rational::one();
    let top = y_top + &Rational::one();
    let h = Segment::new(
        ExactPoint::new(&x_hi + &Rational::one(), y_h.clone()),
        ExactPoint::new(x_v.clone(), y_h.clone()),
    )?;
    let v = Segment::new(
        ExactPoint::new(x_v.clone(), y_h.clone()),
        ExactPoint::new(x_v.clone(), top.clone()),
    )?;
    let t = Segment::new(
        ExactPoint::new(x_v.clone(), top.clone()),
        ExactPoint::new(Rational::zero(), top),
    )?;
    let mut segments = vec![h, v, t];
    let mut labels = vec!["h".to_string(), "v".to_string(), "t".to_string()];
    let mut needles = Vec::new();
    for (c, (left, right)) in needle_segs.into_iter().enumerate() {
        let chord = c + 1;
        needles.push(NeedleRef {
            chord,
            left: segments.len(),
            right: segments.len() + 1,
        });
        segments.extend([left, right]);
        labels.extend([format!("L{chord}"), format!("R{chord}")]);
    }
    let k = segments.len();
    Ok(CoverInstance {
        segments,
        labels,
        k,
        reduction: Some(Reduction {
            y_min: y_min.clone(),
            y_l: y_l.clone(),
            y_h: y_h.clone(),
            y_top: y_top.clone(),
            x_v,
            epsilon: epsilon.clone(),
            needles,
        }),
    })
}

/// Exact acceptance test for a candidate `ε`.
///
/// (i) For needles of rays `r ≠ t`, every pair of their segment lines meets
/// above `r`'s upper endpoints when the rays' lines meet on ray `r`, and
/// strictly between `h` and those endpoints otherwise. (ii) Every needle line
/// passes below `h` at `x = x_v` and crosses the height of `t` at `x > 0`, so
/// the leading segments add no extra bends. (iii) General position.
pub fn validate_epsilon(ci: &CoverInstance) -> bool {
    let Some(red) = ci.reduction() else {
        return false;
    };
    let needles = ci.needles();
    let rays: Vec<Ray> = needles.iter().map(Needle::ray).collect();
    for (i, nr) in needles.iter().enumerate() {
        let top_y = &nr.left.p().y;
        for (j, nt) in needles.iter().enumerate() {
            if i == j {
                continue;
            }
            let Some(x) = line_point(&rays[i], &rays[j]) else {
                return false;
            };
            let on_ray = x.y > *top_y;
            for sr in [&nr.left, &nr.right] {
                for st in [&nt.left, &nt.right] {
                    let Some(w) = line_point(&sr.supporting_ray(), &st.supporting_ray()) else {
                        return false;
                    };
                    let ok = if on_ray {
                        w.y > *top_y
                    } else {
                        w.y > red.y_h && w.y < *top_y
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
    }
    let top = &red.y_top + &Rational::one();
    for n in &needles {
        for s in [&n.left, &n.right] {
            let line = s.supporting_ray();
            match (line.y_at_x(&red.x_v), line.x_at_y(&top)) {
                (Some(y), Some(x)) if y < red.y_h && x.signum() > 0 => {}
                _ => return false,
            }
        }
    }
    check_general_position(ci).is_none()
}

/// First violation of "no two segments collinear, no point on three
/// segments", if any.
pub fn check_general_position(ci: &CoverInstance) -> Option<String> {
    let segs = ci.segments();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (a, b) = (&segs[i], &segs[j]);
            if orientation(a.p(), a.q(), b.p()) == 0 && orientation(a.p(), a.q(), b.q()) == 0 {
                return Some(format!("segments {} and {} are collinear", ci.label(i), ci.label(j)));
            }
            if let Intersection::Point(w) = segment_intersect(a, b) {
                if let Some(k) = (0..segs.len()).find(|&k| k != i && k != j && point_on_segment(&w, &segs[k])) {
                    return Some(format!(
                        "segments {}, {} and {} share the point {w}",
                        ci.label(i),
                        ci.label(j),
                        ci.label(k)
                    ));
                }
            }
        }
    }
    None
}

/// Whether the union of the segments is connected.
pub fn connectivity_check(ci: &CoverInstance) -> bool {
    let segs = ci.segments();
    let mut parent: Vec<usize> = (0..segs.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = segs.len();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj && !segment_intersect(&segs[i], &segs[j]).is_empty() {
                parent[ri] = rj;
                components -= 1;
            }
        }
    }
    components <= 1
}

impl fmt::Display for CoverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={}", self.k)?;
        for (l, s) in self.labels.iter().zip(&self.segments) {
            writeln!(f, "{l} {} {}", s.p(), s.q())?;
        }
        if let Some(r) = &self.reduction {
            writeln!(f, "# y_min={}", r.y_min)?;
            writeln!(f, "# y_l={}", r.y_l)?;
            writeln!(f, "# y_h={}", r.y_h)?;
            writeln!(f, "# y_top={}", r.y_top)?;
            writeln!(f, "# x_v={}", r.x_v)?;
            writeln!(f, "# epsilon={}", r.epsilon)?;
            for n in &r.needles {
                writeln!(
                    f,
                    "# needle {} left={} right={} apex={}",
                    n.chord,
                    self.labels[n.left],
                    self.labels[n.right],
                    self.segments[n.left].q()
                )?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoverInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoverInstance(k={}, m={})", self.k, self.m())
    }
}

impl FromStr for CoverInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut k = None;
        let mut segments = Vec::new();
        let mut labels = Vec::new();
        let mut meta: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let c = c.trim();
                if let Some(rest) = c.strip_prefix("needle ") {
                    meta.push((ln, "needle".into(), rest.to_string()));
                } else if let Some((key, val)) = c.split_once('=') {
                    meta.push((ln, key.trim().to_string(), val.trim().to_string()));
                }
                continue;
            }
            if k.is_none() {
                let v = line
                    .strip_prefix("k=")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(ln, "expected header \"k=<int>\""))?;
                k = Some(v);
                continue;
            }
            let open = line
                .find('(')
                .ok_or_else(|| Error::parse(ln, "expected \"label p q\""))?;
            let pts = parse_points(&line[open..]).map_err(|e| Error::parse(ln, e.to_string()))?;
            let [p, q]: [ExactPoint; 2] = pts
                .try_into()
                .map_err(|_| Error::parse(ln, "a segment needs exactly two points"))?;
            labels.push(line[..open].trim().to_string());
            segments.push(Segment::new(p, q).map_err(|e| Error::parse(ln, e.to_string()))?);
        }
        let k = k.ok_or_else(|| Error::parse(1, "missing \"k=<int>\" header"))?;
        let mut ci = CoverInstance::with_labels(segments, labels, k)?;
        if !meta.is_empty() {
            ci.reduction = Some(parse_reduction(&ci, &meta)?);
        }
        Ok(ci)
    }
}

fn parse_reduction(ci: &CoverInstance, meta: &[(usize, String, String)]) -> Result<Reduction> {
    let scalar = |key: &str| -> Result<Rational> {
        let (ln, _, v) = meta
            .iter()
            .find(|(_, k, _)| k == key)
            .ok_or_else(|| Error::parse(0, format!("missing metadata {key}")))?;
        v.parse().map_err(|_| Error::parse(*ln, format!("bad value for {key}")))
    };
    let mut needles = Vec::new();
    for (ln, _, rest) in meta.iter().filter(|(_, k, _)| k == "needle") {
        let bad = || Error::parse(*ln, "expected \"needle c left=L right=R apex=(x, y)\"");
        let mut it = rest.splitn(4, ' ');
        let chord: usize = it.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let left = it.next().and_then(|v| v.strip_prefix("left=")).ok_or_else(bad)?;
        let right = it.next().and_then(|v| v.strip_prefix("right=")).ok_or_else(bad)?;
        let apex: ExactPoint = it
            .next()
            .and_then(|v| v.strip_prefix("apex="))
            .ok_or_else(bad)?
            .parse()?;
        let (left, right) = (ci.index_of(left).ok_or_else(bad)?, ci.index_of(right).ok_or_else(bad)?);
        if ci.segments[left].q() != &apex || ci.segments[right].q() != &apex {
            return Err(Error::parse(*ln, "needle segments must end at the apex"));
        }
        needles.push(NeedleRef { chord, left, right });
    }
    if ci.m() != 3 + 2 * needles.len()
        || [LEAD_H, LEAD_V, LEAD_T]
            .iter()
            .zip(["h", "v", "t"])
            .any(|(&i, l)| ci.labels.get(i).map(String::as_str) != Some(l))
    {
        return Err(Error::parse(0, "reduction metadata does not match the segment list"));
    }
    Ok(Reduction {
        y_min: scalar("y_min")?,
        y_l: scalar("y_l")?,
        y_h: scalar("y_h")?,
        y_top: scalar("y_top")?,
        x_v: scalar("x_v")?,
        epsilon: scalar("epsilon")?,
        needles,
    })
}
