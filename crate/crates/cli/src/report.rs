//! Serializable report structures. All rationals are rendered as "p/q"
//! strings; floats are rounded to 12 significant digits before
//! serialization so reports are byte-identical across runs.

use serde::Serialize;

use subspectra::bisubstitution::pair_label;
use subspectra::classifier::{RayMeasureProfile, WeightedVerdict};
use subspectra::hull::Hull;
use subspectra::rational::{rat_to_string, CRat, Rat};
use subspectra::substitution::{AperiodicityWitness, HeightResult};
use subspectra::{ErgodicDecomposition, Substitution};

pub fn rats_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_to_string).collect()
}

pub fn crat_to_string(c: &CRat) -> String {
    if c.im == subspectra::rational::rat(0) {
        rat_to_string(&c.re)
    } else {
        format!("{}{:+}i", rat_to_string(&c.re), c.im)
    }
}

/// Round to 12 significant digits; keeps report floats stable across
/// summation-order changes.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor();
    let factor = 10f64.powf(11.0 - magnitude);
    (x * factor).round() / factor
}

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "subspectra",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize)]
pub struct InputEcho {
    pub path: String,
    pub alphabet: Vec<String>,
    pub length: usize,
    pub rules: Vec<RuleEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct RuleEcho {
    pub letter: String,
    pub image: Vec<String>,
}

impl InputEcho {
    pub fn from(path: &str, s: &Substitution) -> Self {
        let letters = s.letters();
        InputEcho {
            path: path.to_string(),
            alphabet: letters.to_vec(),
            length: s.length(),
            rules: (0..letters.len())
                .map(|l| RuleEcho {
                    letter: letters[l].clone(),
                    image: s.rule(l).iter().map(|&x| letters[x].clone()).collect(),
                })
                .collect(),
            weights: s
                .weights()
                .map(|w| w.iter().map(crat_to_string).collect()),
        }
    }
}

#[derive(Serialize)]
pub struct PrimitivityReport {
    pub primitive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_power: Option<usize>,
}

#[derive(Serialize)]
pub struct AperiodicityReport {
    pub aperiodic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_letter: Option<String>,
    pub witness_neighbourhoods: Vec<(String, String)>,
}

impl AperiodicityReport {
    pub fn from(s: &Substitution, w: &AperiodicityWitness) -> Self {
        let letters = s.letters();
        AperiodicityReport {
            aperiodic: w.aperiodic,
            witness_letter: w.letter.map(|l| letters[l].clone()),
            witness_neighbourhoods: w
                .neighbourhoods
                .iter()
                .map(|&(p, su)| (letters[p].clone(), letters[su].clone()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct HeightReport {
    pub height: u64,
    pub return_gcd: u64,
    pub horizon: usize,
}

impl HeightReport {
    pub fn from(h: &HeightResult) -> Self {
        HeightReport {
            height: h.height,
            return_gcd: h.return_gcd,
            horizon: h.horizon,
        }
    }
}

#[derive(Serialize)]
pub struct DecompositionReport {
    pub classes: Vec<Vec<String>>,
    pub transient: Vec<String>,
    pub exponent: u64,
}

impl DecompositionReport {
    pub fn from(s: &Substitution, d: &ErgodicDecomposition) -> Self {
        DecompositionReport {
            classes: d.class_labels(s.letters()),
            transient: d.transient_labels(s.letters()),
            exponent: d.exponent,
        }
    }
}

#[derive(Serialize)]
pub struct SigmaRow {
    pub k: u64,
    pub entries: Vec<SigmaEntry>,
}

#[derive(Serialize)]
pub struct SigmaEntry {
    pub pair: String,
    pub value: String,
}

pub fn sigma_row(s: &Substitution, k: u64, v: &[Rat]) -> SigmaRow {
    SigmaRow {
        k,
        entries: v
            .iter()
            .enumerate()
            .map(|(i, x)| SigmaEntry {
                pair: pair_label(i, s.letters()),
                value: rat_to_string(x),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct HullReport {
    pub parameter_count: usize,
    pub forms: Vec<String>,
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
}

impl HullReport {
    pub fn from(h: &Hull) -> Self {
        HullReport {
            parameter_count: h.family.class_count(),
            forms: h.forms.iter().map(|f| f.render()).collect(),
            vertices: h.extreme.vertices.iter().map(|v| rats_to_strings(v)).collect(),
            rays: h.extreme.rays.iter().map(|v| rats_to_strings(v)).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct RayReport {
    pub ray: Vec<String>,
    pub verdict: &'static str,
    pub certificate: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonvanishing_witness: Option<u64>,
    pub horizon: u64,
    /// λ̂(k) for k ≤ 16 as a readable excerpt; the verdict itself used
    /// the full horizon.
    pub leading_coefficients: Vec<String>,
}

impl RayReport {
    pub fn from(p: &RayMeasureProfile) -> Self {
        RayReport {
            ray: rats_to_strings(&p.ray),
            verdict: p.verdict.label(),
            certificate: p.certificate.label(),
            period: p.period,
            nonvanishing_witness: p.nonvanishing_witness,
            horizon: p.horizon,
            leading_coefficients: rats_to_strings(
                &p.coefficients[..p.coefficients.len().min(17)],
            ),
        }
    }
}

#[derive(Serialize)]
pub struct WeightedReport {
    pub mean: String,
    pub bragg_at_zero: String,
    pub bragg_extinguished: bool,
    pub continuous_part: Vec<&'static str>,
    pub wiener: Vec<WienerPoint>,
    pub label: String,
    pub leading_autocorrelation: Vec<String>,
}

#[derive(Serialize)]
pub struct WienerPoint {
    pub big_k: u64,
    pub value: f64,
}

impl WeightedReport {
    pub fn from(w: &WeightedVerdict) -> Self {
        WeightedReport {
            mean: crat_to_string(&w.mean),
            bragg_at_zero: rat_to_string(&w.bragg_at_zero),
            bragg_extinguished: w.bragg_extinguished,
            continuous_part: w.continuous_part.iter().map(|v| v.label()).collect(),
            wiener: w
                .wiener
                .iter()
                .map(|&(k, v)| WienerPoint {
                    big_k: k,
                    value: round_sig(v),
                })
                .collect(),
            label: w.label.clone(),
            leading_autocorrelation: w
                .autocorrelation
                .iter()
                .take(17)
                .map(crat_to_string)
                .collect(),
        }
    }
}

/// Full pipeline report. Stages that were not reached before an error
/// stay `null`; the `error` field carries the failing stage.
#[derive(Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitivity: Option<PrimitivityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperiodicity: Option<AperiodicityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequencies: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<HeightReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<SigmaRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull: Option<HullReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<RayReport>>,
    pub pure_point_is_delta_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted: Option<WeightedReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<StageError>,
}

#[derive(Serialize)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

impl AnalysisReport {
    pub fn new(path: &str, s: &Substitution) -> Self {
        AnalysisReport {
            tool: ToolInfo::current(),
            input: InputEcho::from(path, s),
            primitivity: None,
            aperiodicity: None,
            frequencies: None,
            height: None,
            decomposition: None,
            sigma: None,
            hull: None,
            rays: None,
            pure_point_is_delta_zero: None,
            weighted: None,
            error: None,
        }
    }
}
