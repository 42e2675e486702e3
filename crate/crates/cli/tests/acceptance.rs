//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use polycover::chord_graph::{
    all_diagrams, cycle_to_path_gadget, hamiltonian_cycle, hamiltonian_path, intersection_graph, ChordDiagram,
};
use polycover::cover_solver::{extract_hamiltonian_path, solve_cover, Polyline};
use polycover::curve_simplify::{
    build_dcs_instance, check_cone_structure, directed_hausdorff_leq, dist_h_nested, dist_h_sequential,
    half_safe_delta_for, segments_within, solve_dcs_zero, PairCategory,
};
use polycover::exact_geom::{ExactPoint, Rational};
use polycover::needle_reduce::build_cover_instance;
use polycover::ray_embed::{check_lemma1, check_theorem1_properties, embed, factorial, ray_graph};

const EMBED_MAX_N: usize = 6;
const LEMMA1_N: u64 = 10;
const BITS_MAX_N: usize = 12;
const COVER_MAX_N: usize = 5;
const GADGET_MAX_N: usize = 5;
const DCS_MAX_N: usize = 4;
const CONE_MAX_N: usize = 4;
const HAUSDORFF_PAIRS: usize = 1000;
const HAUSDORFF_SEED: u64 = 20_241_016;
const SAMPLES_PER_LINK: usize = 4000;
/// Agreement is required when the sampled margin exceeds this many
/// sampling resolutions.
const MARGIN_FACTOR: f64 = 10.0;

type Outcome = (bool, String);

fn criterion_1() -> Outcome {
    let mut total = 0usize;
    let mut bad = Vec::new();
    for n in 1..=EMBED_MAX_N {
        let diagrams = all_diagrams(n);
        let failures: Vec<String> = diagrams
            .par_iter()
            .flat_map_iter(|d| {
                let g = intersection_graph(d);
                (1..=2 * n).filter_map(move |s| match embed(d, s) {
                    Ok(e) if ray_graph(&e) == g => None,
                    Ok(_) => Some(format!("{d} start {s}")),
                    Err(err) => Some(format!("{d} start {s}: {err}")),
                })
            })
            .collect();
        total += diagrams.len() * 2 * n;
        bad.extend(failures);
    }
    (
        bad.is_empty(),
        format!(
            "{total} embeddings for n<={EMBED_MAX_N}, mismatches={} {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn criterion_2() -> Outcome {
    let r = check_lemma1(LEMMA1_N);
    (
        r.ok() && r.checked > 0,
        format!(
            "n={} quadruples={} excluded={} counterexample={:?}",
            r.n, r.checked, r.excluded, r.counterexample
        ),
    )
}

/// Bit length of `k!` by direct multiplication.
fn factorial_bits(k: u64) -> u64 {
    (1..=k)
        .map(num_bigint::BigUint::from)
        .product::<num_bigint::BigUint>()
        .bits()
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut report = Vec::new();
    for n in 1..=BITS_MAX_N {
        let order: Vec<usize> = (1..=n).chain(1..=n).collect();
        let d = ChordDiagram::new(order).expect("crossing diagram");
        let worst = (1..=2 * n)
            .map(|s| check_theorem1_properties(&embed(&d, s).expect("embed")))
            .max_by_key(|r| r.max_bit_length)
            .expect("non-empty");
        // 2^bits ≤ (2n + 1)^(8n), decided on integers.
        let lhs = num_bigint::BigUint::from(1u8) << worst.max_bit_length;
        let rhs = num_bigint::BigUint::from(2 * n as u64 + 1).pow(8 * n as u32);
        let exact_ok = lhs <= rhs;
        // Every coordinate is below (2n)!.
        let top = factorial_bits(2 * n as u64);
        let row_ok = worst.ok()
            && exact_ok
            && worst.within_bound == exact_ok
            && worst.max_bit_length <= top
            && (n != BITS_MAX_N || worst.max_bit_length == 80);
        ok &= row_ok;
        let mark = if row_ok { "" } else { "!" };
        report.push(format!("n={n}:{}/{:.1}{mark}", worst.max_bit_length, worst.bound()));
    }
    let top = factorial_bits(2 * BITS_MAX_N as u64);
    (
        ok,
        format!(
            "max bits/bound {} (bits of {}! = {top})",
            report.join(" "),
            2 * BITS_MAX_N
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut counts = Vec::new();
    let mut bad = Vec::new();
    for n in 1..=COVER_MAX_N {
        let res: Vec<Result<bool, String>> = all_diagrams(n)
            .par_iter()
            .map(|d| {
                let g = intersection_graph(d);
                let ci = build_cover_instance(&embed(d, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                let hp = hamiltonian_path(&g).map_err(|e| e.to_string())?.is_some();
                match solve_cover(&ci).map_err(|e| e.to_string())? {
                    Some(w) => {
                        let path = extract_hamiltonian_path(&w, &ci).map_err(|e| format!("{d}: {e}"))?;
                        if !hp || !g.is_hamiltonian_path(&path) || w.polyline.link_count() > ci.k() {
                            return Err(format!("{d}: witness without a valid path"));
                        }
                        Ok(true)
                    }
                    None if hp => Err(format!("{d}: path exists but no cover")),
                    None => Ok(false),
                }
            })
            .collect();
        let yes = res.iter().filter(|r| matches!(r, Ok(true))).count();
        bad.extend(res.into_iter().filter_map(|r| r.err()));
        counts.push(format!("n={n}:{yes}yes"));
    }
    (
        bad.is_empty(),
        format!("{} failures={} {:?}", counts.join(" "), bad.len(), bad.first()),
    )
}

fn criterion_5() -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for n in 1..=GADGET_MAX_N {
        let res: Vec<(usize, Vec<String>)> = all_diagrams(n)
            .par_iter()
            .map(|d| {
                let hc = hamiltonian_cycle(&intersection_graph(d)).expect("small").is_some();
                let mut errs = Vec::new();
                for x in 1..=n {
                    let gd = cycle_to_path_gadget(d, x).expect("gadget");
                    let hp = hamiltonian_path(&intersection_graph(&gd)).expect("small").is_some();
                    if hp != hc {
                        errs.push(format!("{d} x={x}: HC={hc} HP(gadget)={hp}"));
                    }
                }
                (n, errs)
            })
            .collect();
        for (n, errs) in res {
            checked += n;
            bad.extend(errs);
        }
    }
    (
        bad.is_empty(),
        format!(
            "{checked} (diagram, chord) pairs for n<={GADGET_MAX_N}, failures={} {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn criterion_6() -> Outcome {
    let zero = Rational::zero();
    let mut total = 0;
    let mut bad = Vec::new();
    for n in 1..=DCS_MAX_N {
        let diagrams = all_diagrams(n);
        total += diagrams.len();
        let errs: Vec<String> = diagrams
            .par_iter()
            .filter_map(|d| {
                let built = embed(d, 1).and_then(|e| build_cover_instance(&e)).and_then(|ci| {
                    let si = build_dcs_instance(&ci, &zero)?;
                    let hp = hamiltonian_path(&intersection_graph(d))?.is_some();
                    Ok((ci, si, hp))
                });
                let (ci, si, hp) = match built {
                    Ok(t) => t,
                    Err(e) => return Some(format!("{d}: {e}")),
                };
                let links = si.input.links();
                if !segments_within(&links, ci.segments(), &zero) || !segments_within(ci.segments(), &links, &zero) {
                    return Some(format!("{d}: image differs from the segment union"));
                }
                match solve_dcs_zero(&si, &ci) {
                    Ok(Some(p)) if hp && si.accepts(&p) => None,
                    Ok(None) if !hp => None,
                    Ok(v) => Some(format!("{d}: verdict {} against HP={hp}", v.is_some())),
                    Err(e) => Some(format!("{d}: {e}")),
                }
            })
            .collect();
        bad.extend(errs);
    }
    (
        bad.is_empty(),
        format!(
            "{total} instances for n<={DCS_MAX_N}, failures={} {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

/// x-offset from `c` to the line through curve points `a`, `b` at height `c!`.
fn line_gap(a: u64, b: u64, c: u64) -> Rational {
    let (fa, fb, fc) = (
        Rational::from(factorial(a)),
        Rational::from(factorial(b)),
        Rational::from(factorial(c)),
    );
    let (ra, rb, rc) = (
        Rational::from(a as i64),
        Rational::from(b as i64),
        Rational::from(c as i64),
    );
    &ra + (&fc - &fa) * (&rb - &ra) / (&fb - &fa) - rc
}

fn criterion_7() -> Outcome {
    let three = Rational::from(3);
    let three_quarters = Rational::frac(3, 4);
    let seq = dist_h_sequential(1, 2, 3);
    let nest = dist_h_nested(1, 2, 3);
    // Independent recomputation from the curve points themselves.
    let seq_oracle = line_gap(1, 2, 3);
    let nest_oracle = line_gap(2, 3, 1);
    let mut min_seq: Option<Rational> = None;
    let mut min_nest: Option<Rational> = None;
    for a in 1..=7u64 {
        for b in a + 1..=8 {
            for c in b + 1..=8 {
                let v = dist_h_sequential(a, b, c);
                min_seq = Some(min_seq.map_or(v.clone(), |m| m.min(v)));
            }
        }
        for c in a + 1..=7 {
            for d in c + 1..=8 {
                let v = dist_h_nested(a, c, d);
                min_nest = Some(min_nest.map_or(v.clone(), |m| m.min(v)));
            }
        }
    }
    let fixed_ok = seq == three
        && nest == three_quarters
        && seq_oracle == three
        && nest_oracle == three_quarters
        && min_seq.as_ref() == Some(&three)
        && min_nest.as_ref() == Some(&three_quarters);

    let mut parts = vec![format!(
        "sequential={seq} nested={nest} min over indices<=8: {} {}",
        min_seq.expect("range"),
        min_nest.expect("range")
    )];
    let mut zero_violations = true;
    for n in 1..=CONE_MAX_N {
        let delta = half_safe_delta_for(n);
        let reps: Vec<(usize, usize, usize, usize)> = all_diagrams(n)
            .par_iter()
            .map(|d| {
                let ci = build_cover_instance(&embed(d, 1).expect("embed")).expect("reduce");
                let r = check_cone_structure(&ci, &delta).expect("cones");
                let total = r.violations.len();
                (
                    total,
                    r.count(PairCategory::CrossNeedle),
                    r.count(PairCategory::IntraNeedle),
                    r.count(PairCategory::Leading),
                )
            })
            .collect();
        let sum = reps
            .iter()
            .fold((0, 0, 0, 0), |s, r| (s.0 + r.0, s.1 + r.1, s.2 + r.2, s.3 + r.3));
        zero_violations &= sum.0 == 0;
        parts.push(format!(
            "n={n} delta={delta} violations={} (cross={} intra={} leading={})",
            sum.0, sum.1, sum.2, sum.3
        ));
    }
    (fixed_ok && zero_violations, parts.join("; "))
}

fn random_polyline(rng: &mut ChaCha8Rng) -> Polyline {
    loop {
        let len = rng.gen_range(2..=5);
        let mut v: Vec<ExactPoint> = (0..len)
            .map(|_| {
                let den = rng.gen_range(1..=6);
                ExactPoint::new(
                    Rational::frac(rng.gen_range(-10 * den..=10 * den), den),
                    Rational::frac(rng.gen_range(-10 * den..=10 * den), den),
                )
            })
            .collect();
        v.dedup();
        if let Ok(p) = Polyline::new(v) {
            return p;
        }
    }
}

/// Largest sampled distance from `p` to `q`.
fn sampled_distance(p: &Polyline, q: &Polyline) -> (f64, f64) {
    let qv: Vec<(f64, f64)> = q.vertices().iter().map(|v| v.to_f64()).collect();
    let mut worst: f64 = 0.0;
    let mut resolution: f64 = 0.0;
    for w in p.vertices().windows(2) {
        let (a, b) = (w[0].to_f64(), w[1].to_f64());
        resolution = resolution.max((b.0 - a.0).hypot(b.1 - a.1) / SAMPLES_PER_LINK as f64);
        for i in 0..=SAMPLES_PER_LINK {
            let t = i as f64 / SAMPLES_PER_LINK as f64;
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
    (worst, resolution)
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(HAUSDORFF_SEED);
    let cases: Vec<(Polyline, Polyline, Rational)> = (0..HAUSDORFF_PAIRS)
        .map(|_| {
            let p = random_polyline(&mut rng);
            let q = random_polyline(&mut rng);
            let den = rng.gen_range(1..=8);
            let delta = Rational::frac(rng.gen_range(0..=12 * den), den);
            (p, q, delta)
        })
        .collect();
    let results: Vec<Option<bool>> = cases
        .par_iter()
        .map(|(p, q, d)| {
            let (est, res) = sampled_distance(p, q);
            let df = d.to_f64();
            ((est - df).abs() > MARGIN_FACTOR * res).then(|| directed_hausdorff_leq(p, q, d) == (est <= df))
        })
        .collect();
    let compared = results.iter().flatten().count();
    let disagreements = results.iter().flatten().filter(|ok| !**ok).count();
    let p = Polyline::new(vec![ExactPoint::from_ints(0, 0), ExactPoint::from_ints(1, 0)]).expect("distinct");
    let q = Polyline::new(vec![ExactPoint::from_ints(0, 1), ExactPoint::from_ints(1, 1)]).expect("distinct");
    let at_one = directed_hausdorff_leq(&p, &q, &Rational::one());
    let below = directed_hausdorff_leq(&p, &q, &Rational::frac(99, 100));
    (
        disagreements == 0 && compared > 0 && at_one && !below,
        format!(
            "seed={HAUSDORFF_SEED} pairs={HAUSDORFF_PAIRS} compared={compared} disagreements={disagreements} critical: delta=1 {at_one}, delta=99/100 {below}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_polycover"))
            .args(["pipeline", "--diagram", "1 2 3 1 2 3"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let text = String::from_utf8_lossy(&a.stdout);
    let ok = a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty() && text.contains("verdict: HP exists");
    (
        ok,
        format!(
            "two runs, {} bytes each, identical={}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("embedding preserves the circle graph", criterion_1),
        ("sub-ray lemma", criterion_2),
        ("coordinate bit length", criterion_3),
        ("cover verdict equals Hamiltonian path", criterion_4),
        ("cycle-to-path gadget", criterion_5),
        ("zero-tolerance simplification", criterion_6),
        ("gap fixed points and cone structure", criterion_7),
        ("exact Hausdorff predicate", criterion_8),
        ("pipeline determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = f();
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {name} [{:.1}s] {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
