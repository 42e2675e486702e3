//! End-to-end run: diagram → embedding → cover instance → curve
//! simplification instance → solvers → checks, with a hash chain linking
//! every stage's input to the previous stage's output.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::chord_graph::{hamiltonian_path, intersection_graph, ChordDiagram};
use crate::cover_solver::{extract_hamiltonian_path, solve_cover, verify_cover, CoverWitness};
use crate::curve_simplify::{build_dcs_instance, directed_hausdorff_leq, SimplificationInstance};
use crate::error::Result;
use crate::exact_geom::Rational;
use crate::needle_reduce::{build_cover_instance, CoverInstance};
use crate::ray_embed::{embed, ray_graph, RayEmbedding};

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub input_hash: String,
    pub output_hash: String,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub diagram: ChordDiagram,
    pub start: usize,
    pub embedding: RayEmbedding,
    pub cover: CoverInstance,
    pub dcs: SimplificationInstance,
    pub hamiltonian_path: Option<Vec<usize>>,
    pub witness: Option<CoverWitness>,
    /// Ray graph equals the circle graph.
    pub embedding_ok: bool,
    /// Witness covers every segment within `k` links.
    pub cover_ok: bool,
    /// Chord order read off the witness is a Hamiltonian path.
    pub extraction_ok: bool,
    /// `H(P, P') = 0` for the curve simplification instance.
    pub hausdorff_ok: bool,
    pub stages: Vec<Stage>,
}

impl PipelineRun {
    /// A witness exists and every check on it passed.
    pub fn witness_found(&self) -> bool {
        self.witness.is_some() && self.checks_pass()
    }

    /// Every stage-level verdict agrees with the others.
    pub fn checks_pass(&self) -> bool {
        self.embedding_ok
            && self.hamiltonian_path.is_some() == self.witness.is_some()
            && (self.witness.is_none() || (self.cover_ok && self.extraction_ok && self.hausdorff_ok))
    }

    /// Each stage consumed exactly what the previous stage produced.
    pub fn chain_intact(&self) -> bool {
        self.stages.windows(2).all(|w| w[0].output_hash == w[1].input_hash)
    }
}

fn stage(name: &'static str, input: &str, output: &str) -> Stage {
    Stage {
        name,
        input_hash: sha256_hex(input),
        output_hash: sha256_hex(output),
    }
}

pub fn run_pipeline(diagram: &ChordDiagram, start: usize) -> Result<PipelineRun> {
    let d_text = diagram.to_string();
    let embedding = embed(diagram, start)?;
    let e_text = embedding.to_string();
    let cover = build_cover_instance(&embedding)?;
    let c_text = cover.to_string();
    let dcs = build_dcs_instance(&cover, &Rational::zero())?;
    let s_text = dcs.to_string();
    let graph = intersection_graph(diagram);
    let hamiltonian_path = hamiltonian_path(&graph)?;
    let witness = solve_cover(&cover)?;
    let w_text = witness.as_ref().map_or_else(|| "none\n".to_string(), |w| w.to_string());

    let embedding_ok = ray_graph(&embedding) == graph;
    let (cover_ok, extraction_ok, hausdorff_ok) = match &witness {
        Some(w) => (
            verify_cover(&cover, &w.polyline),
            extract_hamiltonian_path(w, &cover).is_ok_and(|p| graph.is_hamiltonian_path(&p)),
            directed_hausdorff_leq(&dcs.input, &w.polyline, &Rational::zero()),
        ),
        None => (false, false, false),
    };
    let mut run = PipelineRun {
        diagram: diagram.clone(),
        start,
        embedding,
        cover,
        dcs,
        hamiltonian_path,
        witness,
        embedding_ok,
        cover_ok,
        extraction_ok,
        hausdorff_ok,
        stages: Vec::new(),
    };
    let verdict = run.verdict_text();
    run.stages = vec![
        stage("diagram", &d_text, &d_text),
        stage("embed", &d_text, &e_text),
        stage("reduce-cover", &e_text, &c_text),
        stage("reduce-dcs", &c_text, &s_text),
        stage("solve", &s_text, &w_text),
        stage("verify", &w_text, &verdict),
    ];
    Ok(run)
}

impl PipelineRun {
    fn verdict_text(&self) -> String {
        let path = match &self.hamiltonian_path {
            Some(p) => format!(
                "exists {}",
                p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
            ),
            None => "none".into(),
        };
        let cover = match &self.witness {
            Some(w) => format!("{} links", w.polyline.link_count()),
            None => "none".into(),
        };
        format!(
            "hamiltonian path: {path}\ncover witness: {cover}\nembedding check: {}\ncover check: {}\nextraction check: {}\nhausdorff check at delta=0: {}\nverdict: {}\n",
            pass(self.embedding_ok),
            pass(self.cover_ok),
            pass(self.extraction_ok),
            pass(self.hausdorff_ok),
            if !self.checks_pass() {
                "inconsistent"
            } else if self.witness.is_some() {
                "HP exists"
            } else {
                "no HP"
            }
        )
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

impl fmt::Display for PipelineRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "diagram: {}", self.diagram)?;
        writeln!(f, "start: {}", self.start)?;
        writeln!(f, "segments: {} k={}", self.cover.m(), self.cover.k())?;
        writeln!(f, "input polyline vertices: {}", self.dcs.input.vertices().len())?;
        write!(f, "{}", self.verdict_text())?;
        for s in &self.stages {
            writeln!(f, "stage {} in={} out={}", s.name, s.input_hash, s.output_hash)?;
        }
        writeln!(f, "chain: {}", if self.chain_intact() { "intact" } else { "broken" })?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness:")?;
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_pipeline() {
        let run = run_pipeline(&"1 2 3 1 2 3".parse().unwrap(), 1).unwrap();
        assert!(run.witness_found());
        assert_eq!(run.witness.as_ref().unwrap().polyline.link_count(), 9);
        assert!(run.hausdorff_ok);
        assert!(run.chain_intact());
        assert_eq!(
            run.to_string(),
            run_pipeline(&"1 2 3 1 2 3".parse().unwrap(), 1).unwrap().to_string()
        );
    }

    #[test]
    fn edgeless_pipeline_proves_none() {
        let run = run_pipeline(&"1 1 2 2".parse().unwrap(), 1).unwrap();
        assert!(run.witness.is_none());
        assert!(run.hamiltonian_path.is_none());
        assert!(run.checks_pass());
        assert!(run.to_string().contains("verdict: no HP"));
    }

    #[test]
    fn tampering_breaks_the_chain() {
        let mut run = run_pipeline(&"1 2 1 2".parse().unwrap(), 1).unwrap();
        assert!(run.chain_intact());
        run.stages[2].input_hash = sha256_hex("something else");
        assert!(!run.chain_intact());
    }
}
