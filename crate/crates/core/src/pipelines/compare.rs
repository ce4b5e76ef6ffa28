use serde::{Deserialize, Serialize};

use super::{
    geodesic_profile, FractalSignature, GeodesicProfile, Method1Params, Method2Params, Thresholds, Verdict,
};
use super::method1::{fractal_signature, rho};
use crate::error::Result;
use crate::grid::Face;
use crate::ingest::StructureModel;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const CSV_HEADER: &str = "protein_id_1,d_p_1,protein_id_2,d_p_2,rho,delta_p,verdict";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub method1: Method1Params,
    pub method2: Method2Params,
    pub thresholds: Thresholds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceRow {
    pub name: Face,
    pub count_s: usize,
    pub count_t: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub empty_marker: bool,
}

/// Outcome of comparing two structures with both signatures.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub ids: [String; 2],
    pub d_p: [f64; 2],
    pub rho: f64,
    pub profile: GeodesicProfile,
    pub verdict: Verdict,
    pub params: ReportParams,
}

/// Serialized form of [`ComparisonReport`].
#[derive(Serialize)]
struct ReportJson<'a> {
    ids: &'a [String; 2],
    d_p: [f64; 2],
    rho: f64,
    faces: Vec<FaceRow>,
    delta_p: usize,
    verdict: Verdict,
    params: &'a ReportParams,
    tool_version: &'static str,
}

impl ComparisonReport {
    /// Assembles a report from precomputed signatures and profile.
    pub fn from_parts(
        a: &FractalSignature,
        b: &FractalSignature,
        profile: GeodesicProfile,
        method2: &Method2Params,
        thresholds: Thresholds,
    ) -> Result<Self> {
        let rho = rho(a, b)?;
        Ok(Self {
            ids: [a.pdb_id.clone(), b.pdb_id.clone()],
            d_p: [a.d_p, b.d_p],
            rho,
            verdict: thresholds.verdict(rho, profile.delta_p),
            profile,
            params: ReportParams { method1: a.params.clone(), method2: method2.clone(), thresholds },
        })
    }

    pub fn delta_p(&self) -> usize {
        self.profile.delta_p
    }

    pub fn face_rows(&self) -> Vec<FaceRow> {
        self.profile
            .faces
            .iter()
            .map(|c| FaceRow { name: c.face, count_s: c.source, count_t: c.target, empty_marker: c.empty_marker })
            .collect()
    }

    fn json_view(&self) -> ReportJson<'_> {
        ReportJson {
            ids: &self.ids,
            d_p: self.d_p,
            rho: self.rho,
            faces: self.face_rows(),
            delta_p: self.profile.delta_p,
            verdict: self.verdict,
            params: &self.params,
            tool_version: TOOL_VERSION,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.json_view()).expect("report is always serializable")
    }

    /// Pretty-printed JSON with keys in schema order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.json_view()).expect("report is always serializable")
    }

    /// One data row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6},{},{:.6},{:.6},{},{}",
            csv_field(&self.ids[0]),
            self.d_p[0],
            csv_field(&self.ids[1]),
            self.d_p[1],
            self.rho,
            self.profile.delta_p,
            self.verdict.as_str()
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs both methods on a pair and applies the similarity thresholds.
pub fn compare(
    a: &StructureModel,
    b: &StructureModel,
    method1: &Method1Params,
    method2: &Method2Params,
    thresholds: Thresholds,
) -> Result<ComparisonReport> {
    let (sa, sb) = rayon::join(|| fractal_signature(a, method1), || fractal_signature(b, method1));
    let profile = geodesic_profile(a, b, method2)?;
    ComparisonReport::from_parts(&sa?, &sb?, profile, method2, thresholds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signature(id: &str, d_p: f64) -> FractalSignature {
        FractalSignature {
            pdb_id: id.into(),
            d_p,
            r_squared: 1.0,
            slice_count: 1,
            params: Method1Params::default(),
            series: crate::fractal::BoxCountSeries { entries: vec![], side: 512 },
        }
    }

    #[test]
    fn verdicts_follow_thresholds() {
        let p = GeodesicProfile::from_counts([4, 4, 5, 6, 5, 3], [4, 4, 4, 6, 4, 3]);
        let r = ComparisonReport::from_parts(
            &signature("3v2j", 1.661190),
            &signature("3v2m", 1.656160),
            p,
            &Method2Params::default(),
            Thresholds::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Similar);
        assert!((r.rho - 0.00503).abs() < 1e-9);
        assert_eq!(r.csv_row(), "3v2j,1.661190,3v2m,1.656160,0.005030,2,similar");
    }

    #[test]
    fn json_schema() {
        let p = GeodesicProfile::from_counts([1; 6], [2; 6]);
        let r = ComparisonReport::from_parts(
            &signature("a", 1.5),
            &signature("b,c", 1.6),
            p,
            &Method2Params::default(),
            Thresholds::default(),
        )
        .unwrap();
        let v = r.to_json_value();
        for key in ["ids", "d_p", "rho", "faces", "delta_p", "verdict", "params", "tool_version"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["faces"].as_array().unwrap().len(), 6);
        assert_eq!(v["faces"][0]["name"], "front");
        assert_eq!(v["delta_p"], 6);
        assert_eq!(v["verdict"], "dissimilar");
        assert_eq!(v["params"]["thresholds"]["delta"], 12);
        assert!(r.csv_row().starts_with("a,1.500000,\"b,c\","));
    }
}
