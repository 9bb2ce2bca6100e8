use serde::Serialize;

use super::{build_decomposition, build_v1_to_v_tour, label_intervals_at, Obstruction, Replay};
use crate::digraph::{Digraph, Walk};
use crate::error::{Error, Result};
use crate::lemma::{exists_covertour_no_revisit, is_no_revisit_walk, shortest_cover_tour, NoRevisitReading};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// No cover tour from `a` ends at `b`, so `P(L(a,b)) = 0 < 1/(n−1)`.
    NoCoverTour,
    /// The shortest tour `T` never returns to its start.
    #[serde(rename = "T-no-revisit")]
    TNoRevisit,
    /// An arc `W` needs is missing.
    #[serde(rename = "W-edge-missing")]
    WEdgeMissing,
    /// The interval construction gave a tour from `U[i+1]` to `U[i]`
    /// avoiding its start, but `U[i+1]→U[i]` is missing.
    ReverseArcMissing,
    /// Found by searching all pairs directly, after the replay produced
    /// no failed obligation.
    DirectWitness,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::NoCoverTour => "no-cover-tour",
            CertificateKind::TNoRevisit => "T-no-revisit",
            CertificateKind::WEdgeMissing => "W-edge-missing",
            CertificateKind::ReverseArcMissing => "reverse-arc-missing",
            CertificateKind::DirectWitness => "direct-witness",
        }
    }
}

/// Evidence that a graph is not last-visit uniform.
///
/// Except for [`CertificateKind::NoCoverTour`], the evidence is an absent
/// arc `a→b` together with a cover tour from `a` ending at `b` that never
/// returns to `a`. By the out-neighbour lemma some out-neighbour `x` of `a`
/// then has `P(L(x,b)) < P(L(a,b))`, which a uniform graph cannot have.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// The arc `v→u` (reverse absent) the replay started from.
    pub arc: (usize, usize),
    /// `(a, b)`.
    pub obligated: (usize, usize),
    pub witness: Option<Walk>,
    /// `U` when the replay got that far.
    pub u_sequence: Option<Vec<usize>>,
}

impl Certificate {
    /// Checks the evidence from scratch.
    pub fn verify(&self, g: &Digraph) -> bool {
        let (a, b) = self.obligated;
        if a >= g.n() || b >= g.n() || a == b {
            return false;
        }
        match (&self.witness, self.kind) {
            (None, CertificateKind::NoCoverTour) => matches!(shortest_cover_tour(g, a, b), Ok(None)),
            (Some(w), _) => {
                !g.has_arc(a, b) && is_no_revisit_walk(g, a, b, w.vertices(), NoRevisitReading::CoverTour)
            }
            (None, _) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Certification {
    AllBidirected,
    NonUniform(Certificate),
}

/// Every arc paired, or a certificate of non-uniformity obtained by
/// replaying the argument on the first unpaired arc `v→u`.
pub fn certify_nonbidirected_implies_nonuniform(g: &Digraph) -> Result<Certification> {
    g.require_strongly_connected()?;
    let Some((v, u)) = g.first_unpaired_arc() else {
        return Ok(Certification::AllBidirected);
    };
    let cert = |kind, obligated, witness: Option<Walk>, u_sequence| Certificate {
        kind,
        arc: (v, u),
        obligated,
        witness,
        u_sequence,
    };

    let dec = match build_decomposition(g, u, v)? {
        Replay::Obstruction(Obstruction::NoCoverTour { u, v }) => {
            return Ok(Certification::NonUniform(cert(CertificateKind::NoCoverTour, (u, v), None, None)));
        }
        Replay::Obstruction(Obstruction::TNoRevisit { tour }) => {
            let w = Some(tour.walk().clone());
            return Ok(Certification::NonUniform(cert(CertificateKind::TNoRevisit, (u, v), w, None)));
        }
        Replay::Obstruction(Obstruction::WEdgeMissing { from, to, witness }) => {
            return Ok(Certification::NonUniform(cert(
                CertificateKind::WEdgeMissing,
                (from, to),
                Some(witness),
                None,
            )));
        }
        Replay::Decomposition(dec) => dec,
    };

    let k = dec.u_sequence.len();
    if k >= 3 {
        for r in 0..k {
            let labels = label_intervals_at(&dec, r)?;
            let tour = build_v1_to_v_tour(g, &dec, &labels)?;
            let (a, b) = (labels.anchors[1], labels.anchors[0]);
            if !g.has_arc(a, b) {
                return Ok(Certification::NonUniform(cert(
                    CertificateKind::ReverseArcMissing,
                    (a, b),
                    Some(tour),
                    Some(dec.u_sequence.clone()),
                )));
            }
        }
    }

    // Fewer than three U vertices, or every obligation met: search directly.
    let n = g.n();
    let pairs = || (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| a != b);
    for (a, b) in pairs().filter(|&(a, b)| !g.has_arc(a, b)) {
        if let Some(w) = exists_covertour_no_revisit(g, a, b, NoRevisitReading::CoverTour)? {
            let useq = Some(dec.u_sequence.clone());
            return Ok(Certification::NonUniform(cert(CertificateKind::DirectWitness, (a, b), Some(w), useq)));
        }
    }
    for (a, b) in pairs() {
        if shortest_cover_tour(g, a, b)?.is_none() {
            let useq = Some(dec.u_sequence.clone());
            return Ok(Certification::NonUniform(cert(CertificateKind::NoCoverTour, (a, b), None, useq)));
        }
    }
    Err(Error::CheckFailed(format!(
        "no certificate of non-uniformity found for the unpaired arc {v}→{u}"
    )))
}
