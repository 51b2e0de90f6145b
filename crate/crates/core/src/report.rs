//! Reproduction report: recomputed quantities next to their published values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{
    anchor_frame, angle_check_l3, l3_chord, length_l2, length_l3, middle_solution, slab_metrics,
    tau_frame, CurveKind, ParamTriple,
};

/// Published values at the L3 optimum, in table order.
pub const L3_TABLE: [(&str, f64); 22] = [
    ("t", 0.606648),
    ("d", 0.901284),
    ("phi1", 0.918966),
    ("psi1", 0.004276),
    ("p1", 0.004276),
    ("p", 1.295109),
    ("ell2", 1.310075),
    ("BP2", 0.004297),
    ("u0", 0.752203),
    ("v0", 0.504123),
    ("w0", 0.322590),
    ("q1", 0.444661),
    ("q", 0.620578),
    ("q2", 0.200019),
    ("ell3", 1.305735),
    ("|L3|", 3.921545),
    ("M.x", 0.500044),
    ("M.y", -0.253125),
    ("M.z", 0.279697),
    ("N.x", 0.092710),
    ("N.y", -0.552260),
    ("N.z", 0.673078),
];

/// Published length at the L2 optimum.
pub const L2_LENGTH: f64 = 3.934255;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub name: String,
    pub computed: f64,
    pub published: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleCheck {
    pub dm_a: f64,
    pub dn_b: f64,
    pub both_obtuse: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub curve: CurveKind,
    pub params: [f64; 3],
    /// Where the `published` column comes from.
    pub source: String,
    pub entries: Vec<ReportEntry>,
    pub angles: Option<AngleCheck>,
    pub max_deviation: f64,
}

impl ReportDocument {
    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn entries(computed: &[(&str, f64)], published: &[(&str, f64)]) -> Vec<ReportEntry> {
    computed
        .iter()
        .zip(published)
        .map(|(&(name, value), &(pname, target))| {
            debug_assert_eq!(name, pname);
            ReportEntry {
                name: name.to_string(),
                computed: value,
                published: target,
                deviation: (value - target).abs(),
            }
        })
        .collect()
}

fn document(
    curve: CurveKind,
    params: [f64; 3],
    entries: Vec<ReportEntry>,
    angles: Option<AngleCheck>,
) -> ReportDocument {
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0, f64::max);
    ReportDocument {
        curve,
        params,
        source: "published numerical table for the optimal parameters".into(),
        entries,
        angles,
        max_deviation,
    }
}

pub fn l3_report(params: [f64; 3]) -> Result<ReportDocument> {
    let p = ParamTriple::try_from(params)?;
    let frame = anchor_frame(&p)?;
    let tf = tau_frame(&frame)?;
    let d = slab_metrics(&frame).d;
    let mid = middle_solution(&p)?;
    let chord = l3_chord(&p)?;
    let total = length_l3(&p)?;
    let bp2 = mid.length * mid.p1 / (mid.p1 + mid.p + mid.p2);
    let (dm_a, dn_b) = angle_check_l3(&p)?;
    let half_pi = std::f64::consts::FRAC_PI_2;

    let computed = [
        ("t", p.t),
        ("d", d),
        ("phi1", mid.phi1),
        ("psi1", mid.psi1),
        ("p1", mid.p1),
        ("p", mid.p),
        ("ell2", mid.length),
        ("BP2", bp2),
        ("u0", tf.u0),
        ("v0", tf.v0),
        ("w0", tf.w0),
        ("q1", chord.q1),
        ("q", chord.q),
        ("q2", chord.q2),
        ("ell3", chord.ell3),
        ("|L3|", total),
        ("M.x", chord.m.x),
        ("M.y", chord.m.y),
        ("M.z", chord.m.z),
        ("N.x", chord.n.x),
        ("N.y", chord.n.y),
        ("N.z", chord.n.z),
    ];
    Ok(document(
        CurveKind::L3,
        params,
        entries(&computed, &L3_TABLE),
        Some(AngleCheck {
            dm_a,
            dn_b,
            both_obtuse: dm_a > half_pi && dn_b > half_pi,
        }),
    ))
}

pub fn l2_report(params: [f64; 3]) -> Result<ReportDocument> {
    let p = ParamTriple::try_from(params)?;
    let computed = [("|L2|", length_l2(&p)?)];
    Ok(document(
        CurveKind::L2,
        params,
        entries(&computed, &[("|L2|", L2_LENGTH)]),
        None,
    ))
}

/// Report for an open curve with a published optimum.
pub fn report(kind: CurveKind, params: Option<[f64; 3]>) -> Result<ReportDocument> {
    let params = params.or(kind.default_params());
    match (kind, params) {
        (CurveKind::L2, Some(x)) => l2_report(x),
        (CurveKind::L3, Some(x)) => l3_report(x),
        _ => Err(Error::InvalidArgument(format!(
            "no published table for {kind}; use L2 or L3"
        ))),
    }
}
