//! Lower bounds of ℓ0 as maxima of Capra-affine functions.
//!
//! A Capra-affine function is `x ↦ ¢(x, y) − z`. With `y_i ∈ ∂_¢ ℓ0(x_i)` and
//! `z_i = ℓ0^¢(y_i)`, the Capra-Young inequality gives
//!
//! ```text
//! ℓ0(x) ≥ max_i ( ¢(x, y_i) − ℓ0^¢(y_i) )   for all x,
//! ```
//!
//! with equality at every sample `x_i`. The bound is constant along rays.

use serde::{Deserialize, Serialize};

use crate::capra::{capra_conjugate, capra_coupling};
use crate::error::{Error, Result};
use crate::norms::{check_dims, PExponent, Vector};
use crate::subdiff::{subdiff_member, subdiff_witness};
use crate::DEFAULT_TOL;

const FORMAT_TAG: &str = "capra-affine-model";

#[derive(Clone, Debug, PartialEq)]
pub struct CapraAffinePiece {
    dual_point: Vec<f64>,
    offset: f64,
}

impl CapraAffinePiece {
    pub fn new(dual_point: Vec<f64>, p: PExponent) -> Self {
        let offset = capra_conjugate(&dual_point, p);
        CapraAffinePiece { dual_point, offset }
    }

    pub fn dual_point(&self) -> &[f64] {
        &self.dual_point
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn eval(&self, x: &[f64], p: PExponent) -> f64 {
        capra_coupling(x, &self.dual_point, p) - self.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapraAffineModel {
    p: PExponent,
    pieces: Vec<CapraAffinePiece>,
    samples: Vec<Vec<f64>>,
}

fn require_capra_convex(p: PExponent) -> Result<()> {
    if p.is_interior() {
        Ok(())
    } else {
        Err(Error::NotCapraConvex { p: p.to_string() })
    }
}

/// Builds the model from one canonical subgradient per sample.
pub fn build_model(samples: &[Vec<f64>], p: PExponent) -> Result<CapraAffineModel> {
    require_capra_convex(p)?;
    let first = samples.first().ok_or(Error::EmptySamples)?;
    if first.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut model = CapraAffineModel { p, pieces: Vec::with_capacity(samples.len()), samples: vec![] };
    for x in samples {
        model.refine(x)?;
    }
    Ok(model)
}

/// `max_i ( ¢(x, y_i) − offset_i )`.
pub fn eval_model(model: &CapraAffineModel, x: &[f64]) -> Result<f64> {
    check_dims(model.dim(), x.len())?;
    Ok(model.pieces.iter().map(|piece| piece.eval(x, model.p)).fold(f64::NEG_INFINITY, f64::max))
}

impl CapraAffineModel {
    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    pub fn pieces(&self) -> &[CapraAffinePiece] {
        &self.pieces
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Adds the piece generated at a new sample point.
    pub fn refine(&mut self, x: &[f64]) -> Result<()> {
        if let Some(s) = self.samples.first() {
            check_dims(s.len(), x.len())?;
        }
        Vector::new(x.to_vec())?;
        let y = subdiff_witness(x, self.p)?;
        self.pieces.push(CapraAffinePiece::new(y, self.p));
        self.samples.push(x.to_vec());
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            format: FORMAT_TAG.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            p: self.p,
            pieces: self
                .pieces
                .iter()
                .map(|piece| PieceDoc { y: piece.dual_point.clone(), offset: piece.offset })
                .collect(),
            samples: self.samples.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("model documents always serialize")
    }

    /// Parses and re-validates a serialized model.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        if doc.format != FORMAT_TAG {
            return Err(Error::InvalidModel(format!("unknown format tag {:?}", doc.format)));
        }
        require_capra_convex(doc.p)?;
        if doc.pieces.is_empty() {
            return Err(Error::EmptySamples);
        }
        if doc.pieces.len() != doc.samples.len() {
            return Err(Error::InvalidModel(format!(
                "{} pieces but {} samples",
                doc.pieces.len(),
                doc.samples.len()
            )));
        }
        let d = doc.samples[0].len();
        let mut pieces = Vec::with_capacity(doc.pieces.len());
        for (piece, x) in doc.pieces.into_iter().zip(&doc.samples) {
            check_dims(d, x.len())?;
            check_dims(d, piece.y.len())?;
            Vector::new(x.clone())?;
            Vector::new(piece.y.clone())?;
            let conj = capra_conjugate(&piece.y, doc.p);
            if (conj - piece.offset).abs() > 1e-12 * conj.abs().max(1.0) {
                return Err(Error::InvalidModel(format!(
                    "offset {} differs from conjugate {conj}",
                    piece.offset
                )));
            }
            if !subdiff_member(x, &piece.y, doc.p, DEFAULT_TOL).member {
                return Err(Error::InvalidModel("dual point is not a subgradient at its sample".into()));
            }
            pieces.push(CapraAffinePiece { dual_point: piece.y, offset: piece.offset });
        }
        Ok(CapraAffineModel { p: doc.p, pieces, samples: doc.samples })
    }
}

#[derive(Serialize, Deserialize)]
struct PieceDoc {
    y: Vec<f64>,
    offset: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    format: String,
    version: String,
    p: PExponent,
    pieces: Vec<PieceDoc>,
    samples: Vec<Vec<f64>>,
}
