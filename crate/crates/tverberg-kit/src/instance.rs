//! JSON interchange: problem instances, point configurations, and saved
//! vector fields. Writers emit sorted, deduplicated faces; readers reject
//! out-of-range labels and non-hereditary data.

use std::path::Path;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::complex::{
    Coloring, ComplexFamily, LabeledPartition, Parameters, SimplicialComplex, VertexSet,
};
use crate::error::{Error, Result};
use crate::geometry::{PointConfiguration, Rational};
use crate::morse::{DiscreteVectorField, MatchedPair};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub maximal_faces: Vec<Vec<u32>>,
}

/// The on-disk instance format:
/// `{ m, r, k, s, d, coloring: [[labels]..], complexes: [{maximal_faces}] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub m: u32,
    pub r: u32,
    pub k: u32,
    pub s: u32,
    pub d: u32,
    pub coloring: Vec<Vec<u32>>,
    pub complexes: Vec<ComplexJson>,
}

pub struct Instance {
    pub params: Parameters,
    pub coloring: Coloring,
    pub family: ComplexFamily,
}

fn check_labels(m: u32, labels: &[u32], what: &str) -> Result<()> {
    for &l in labels {
        if l < 1 || l > m {
            return Err(Error::InvalidInput(format!("{what}: label {l} outside [1,{m}]")));
        }
    }
    Ok(())
}

impl InstanceJson {
    pub fn into_instance(self) -> Result<Instance> {
        let m = self.m;
        let mut classes = Vec::new();
        for (i, c) in self.coloring.iter().enumerate() {
            check_labels(m, c, &format!("color class {}", i + 1))?;
            classes.push(VertexSet::from_labels(c));
        }
        let coloring = Coloring::new(m, classes)?;
        if self.complexes.len() != self.r as usize {
            return Err(Error::InvalidInput(format!(
                "instance declares r = {} but lists {} complexes",
                self.r,
                self.complexes.len()
            )));
        }
        let mut members = Vec::new();
        for (i, c) in self.complexes.iter().enumerate() {
            let mut faces = Vec::new();
            for f in &c.maximal_faces {
                check_labels(m, f, &format!("complex {}", i + 1))?;
                faces.push(VertexSet::from_labels(f));
            }
            members.push(SimplicialComplex::from_maximal_faces(m, &faces)?);
        }
        let family = ComplexFamily::new(members)?;
        let params = Parameters { r: self.r, d: self.d, k: self.k, s: self.s, m };
        Ok(Instance { params, coloring, family })
    }

    pub fn from_parts(params: &Parameters, coloring: &Coloring, fam: &ComplexFamily) -> Self {
        let complexes = fam
            .members()
            .iter()
            .map(|k| {
                let mut faces: Vec<Vec<u32>> =
                    k.maximal_faces().iter().map(|f| f.to_labels()).collect();
                faces.sort();
                faces.dedup();
                ComplexJson { maximal_faces: faces }
            })
            .collect();
        InstanceJson {
            m: params.m,
            r: params.r,
            k: params.k,
            s: params.s,
            d: params.d,
            coloring: coloring.classes().iter().map(|c| c.to_labels()).collect(),
            complexes,
        }
    }
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    let json: InstanceJson = serde_json::from_str(&text)?;
    json.into_instance()
}

pub fn save_instance(
    path: &Path,
    params: &Parameters,
    coloring: &Coloring,
    fam: &ComplexFamily,
) -> Result<()> {
    let json = InstanceJson::from_parts(params, coloring, fam);
    std::fs::write(path, serde_json::to_string_pretty(&json)?)?;
    Ok(())
}

/// `pts.json`: `{ "d": int, "points": [["num/den", ..], ..] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointsJson {
    pub d: usize,
    pub points: Vec<Vec<String>>,
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt =
        num.parse().map_err(|_| Error::InvalidInput(format!("bad numerator in {text:?}")))?;
    let den: BigInt =
        den.parse().map_err(|_| Error::InvalidInput(format!("bad denominator in {text:?}")))?;
    if den == BigInt::from(0) {
        return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl PointsJson {
    pub fn into_configuration(self) -> Result<PointConfiguration> {
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let coords: Result<Vec<Rational>> =
                p.iter().map(|s| parse_rational(s)).collect();
            points.push(coords?);
        }
        PointConfiguration::new(self.d, points)
    }

    pub fn from_configuration(config: &PointConfiguration) -> Self {
        PointsJson {
            d: config.d,
            points: config
                .points
                .iter()
                .map(|p| p.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

pub fn load_points(path: &Path) -> Result<PointConfiguration> {
    let text = std::fs::read_to_string(path)?;
    let json: PointsJson = serde_json::from_str(&text)?;
    json.into_configuration()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairJson {
    /// The lower cell, as parts `A_1 .. A_r` (sorted label arrays).
    pub alpha: Vec<Vec<u32>>,
    /// The upper cell.
    pub beta: Vec<Vec<u32>>,
    /// 1-based `(j, i)`.
    pub step: [u32; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalJson {
    pub parts: Vec<Vec<u32>>,
    pub dim: i64,
}

/// `field.json`: the saved discrete vector field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldJson {
    pub m: u32,
    pub r: u32,
    pub pairs: Vec<PairJson>,
    pub critical: Vec<CriticalJson>,
}

fn partition_to_json(cell: &LabeledPartition) -> Vec<Vec<u32>> {
    cell.parts().iter().map(|p| p.to_labels()).collect()
}

fn partition_from_json(m: u32, parts: &[Vec<u32>]) -> Result<LabeledPartition> {
    let mut sets = Vec::with_capacity(parts.len());
    for p in parts {
        check_labels(m, p, "partition part")?;
        sets.push(VertexSet::from_labels(p));
    }
    LabeledPartition::new(m, sets)
}

impl FieldJson {
    pub fn from_field(field: &DiscreteVectorField, m: u32, r: u32) -> Self {
        FieldJson {
            m,
            r,
            pairs: field
                .pairs
                .iter()
                .map(|p| PairJson {
                    alpha: partition_to_json(&p.lower),
                    beta: partition_to_json(&p.upper),
                    step: [p.step.0, p.step.1],
                })
                .collect(),
            critical: field
                .critical
                .iter()
                .map(|c| CriticalJson { parts: partition_to_json(c), dim: c.dim() })
                .collect(),
        }
    }

    pub fn into_field(self) -> Result<DiscreteVectorField> {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            pairs.push(MatchedPair {
                lower: partition_from_json(self.m, &p.alpha)?,
                upper: partition_from_json(self.m, &p.beta)?,
                step: (p.step[0], p.step[1]),
            });
        }
        let mut critical = Vec::with_capacity(self.critical.len());
        for c in &self.critical {
            let cell = partition_from_json(self.m, &c.parts)?;
            if cell.dim() != c.dim {
                return Err(Error::InvalidInput(format!(
                    "critical cell {cell} declares dim {} but has dim {}",
                    c.dim,
                    cell.dim()
                )));
            }
            critical.push(cell);
        }
        Ok(DiscreteVectorField { pairs, critical })
    }
}

pub fn save_field(path: &Path, field: &DiscreteVectorField, m: u32, r: u32) -> Result<()> {
    let json = FieldJson::from_field(field, m, r);
    std::fs::write(path, serde_json::to_string_pretty(&json)?)?;
    Ok(())
}

pub fn load_field(path: &Path) -> Result<(DiscreteVectorField, u32, u32)> {
    let text = std::fs::read_to_string(path)?;
    let json: FieldJson = serde_json::from_str(&text)?;
    let (m, r) = (json.m, json.r);
    Ok((json.into_field()?, m, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::make_bct_family;
    use crate::morse::run_matching;

    #[test]
    fn instance_roundtrip() {
        let (params, coloring, fam) = make_bct_family(2, 1, 1).unwrap();
        let json = InstanceJson::from_parts(&params, &coloring, &fam);
        let text = serde_json::to_string(&json).unwrap();
        let back: InstanceJson = serde_json::from_str(&text).unwrap();
        let inst = back.into_instance().unwrap();
        assert_eq!(inst.params, params);
        assert_eq!(inst.coloring, coloring);
        for i in 0..fam.r() {
            assert_eq!(*inst.family.member(i), *fam.member(i));
        }
    }

    #[test]
    fn writer_emits_sorted_faces() {
        let (params, coloring, fam) = make_bct_family(2, 1, 1).unwrap();
        let json = InstanceJson::from_parts(&params, &coloring, &fam);
        for c in &json.complexes {
            let mut sorted = c.maximal_faces.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(c.maximal_faces, sorted);
            for f in &c.maximal_faces {
                let mut fs = f.clone();
                fs.sort();
                assert_eq!(*f, fs);
            }
        }
    }

    #[test]
    fn out_of_range_labels_rejected() {
        let json = InstanceJson {
            m: 3,
            r: 1,
            k: 0,
            s: 1,
            d: 1,
            coloring: vec![vec![1, 2, 3]],
            complexes: vec![ComplexJson { maximal_faces: vec![vec![4]] }],
        };
        assert!(json.into_instance().is_err());
    }

    #[test]
    fn overlapping_coloring_rejected() {
        let json = InstanceJson {
            m: 3,
            r: 1,
            k: 1,
            s: 1,
            d: 1,
            coloring: vec![vec![1, 2], vec![2, 3]],
            complexes: vec![ComplexJson { maximal_faces: vec![vec![1]] }],
        };
        assert!(json.into_instance().is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5");
    }

    #[test]
    fn points_roundtrip() {
        let config = PointConfiguration::random(7, 4, 2);
        let json = PointsJson::from_configuration(&config);
        let back = json.into_configuration().unwrap();
        assert_eq!(back.points, config.points);
    }

    #[test]
    fn field_roundtrip() {
        let (_, coloring, fam) = make_bct_family(2, 1, 1).unwrap();
        let run = run_matching(&fam, &coloring, 1, 1, false, 1 << 26).unwrap();
        let json = FieldJson::from_field(&run.field, 6, 2);
        let text = serde_json::to_string(&json).unwrap();
        let back: FieldJson = serde_json::from_str(&text).unwrap();
        let field = back.into_field().unwrap();
        assert_eq!(field.pairs, run.field.pairs);
        assert_eq!(field.critical, run.field.critical);
    }

    #[test]
    fn field_dim_mismatch_rejected() {
        let json = FieldJson {
            m: 3,
            r: 1,
            pairs: Vec::new(),
            critical: vec![CriticalJson { parts: vec![vec![1, 2]], dim: 0 }],
        };
        assert!(json.into_field().is_err());
    }
}
