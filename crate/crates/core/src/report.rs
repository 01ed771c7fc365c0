//! Serializable evaluation output.

use serde::{Deserialize, Serialize};

use crate::model::EvalConfig;
use crate::subclass::MotionSubclass;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubclassScores {
    pub subclass: MotionSubclass,
    /// Complete ground-truth trajectories of this subclass.
    pub gt_count: usize,
    /// `None` when the subclass has no ground truth.
    pub ap_det: Option<f64>,
    pub ap_f: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecallPoint {
    pub recall: f64,
    pub ade: Option<f64>,
    pub fde: Option<f64>,
    /// False when the ranked list never reaches `recall`; the values are then
    /// taken over the whole list.
    pub attained: bool,
    pub achieved_recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegacyMetrics {
    pub match_threshold: f64,
    pub at_recall: Vec<RecallPoint>,
    pub ade_avg_recall: Option<f64>,
    pub fde_avg_recall: Option<f64>,
    pub miss_rate: Option<f64>,
    pub max_recall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrCurveDump {
    pub subclass: MotionSubclass,
    pub current_threshold: f64,
    pub final_threshold: f64,
    /// `(recall, precision)` after each scored record.
    pub points: Vec<[f64; 2]>,
}

impl PrCurveDump {
    pub fn file_stem(&self) -> String {
        format!(
            "{}_cur{}_fin{}",
            self.subclass, self.current_threshold, self.final_threshold
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("recall,precision\n");
        for [r, p] in &self.points {
            out.push_str(&format!("{r},{p}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InputDigests {
    pub gt_sha256: String,
    pub pred_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config: EvalConfig,
    pub inputs: InputDigests,
    pub subclasses: Vec<SubclassScores>,
    pub map_det: f64,
    pub map_f: f64,
    pub legacy: LegacyMetrics,
    pub pr_curves: Vec<PrCurveDump>,
    pub warnings: Vec<String>,
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.digits$}"))
}

impl EvalReport {
    pub fn scores(&self, subclass: MotionSubclass) -> &SubclassScores {
        self.subclasses
            .iter()
            .find(|s| s.subclass == subclass)
            .expect("report lists every subclass")
    }

    pub fn ap_f(&self, subclass: MotionSubclass) -> Option<f64> {
        self.scores(subclass).ap_f
    }

    pub fn ap_det(&self, subclass: MotionSubclass) -> Option<f64> {
        self.scores(subclass).ap_det
    }

    /// Plain-text summary table, three decimals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "profile {}  K={}  pairs {:?}/{:?}\n",
            self.config.class_profile, self.config.k, self.config.current_thresholds, self.config.final_thresholds
        ));
        out.push_str(&format!(
            "{:<12}{:>8}{:>10}{:>10}\n",
            "subclass", "gt", "AP_det", "AP_f"
        ));
        for s in &self.subclasses {
            out.push_str(&format!(
                "{:<12}{:>8}{:>10}{:>10}\n",
                s.subclass.as_str(),
                s.gt_count,
                fmt_opt(s.ap_det, 3),
                fmt_opt(s.ap_f, 3)
            ));
        }
        out.push_str(&format!("{:<20}{:>10.3}{:>10.3}\n", "mean", self.map_det, self.map_f));
        let l = &self.legacy;
        out.push_str(&format!("legacy (match at {} m)\n", l.match_threshold));
        for p in &l.at_recall {
            out.push_str(&format!(
                "  @{:>3.0}% recall  ADE {:>8}  FDE {:>8}{}\n",
                p.recall * 100.0,
                fmt_opt(p.ade, 3),
                fmt_opt(p.fde, 3),
                if p.attained { "" } else { "  (not attained)" }
            ));
        }
        out.push_str(&format!(
            "  recall-avg   ADE {:>8}  FDE {:>8}\n  miss rate {}\n",
            fmt_opt(l.ade_avg_recall, 3),
            fmt_opt(l.fde_avg_recall, 3),
            fmt_opt(l.miss_rate, 3)
        ));
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}
