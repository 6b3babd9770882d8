//! JSON descriptors for channels and states.
//!
//! A descriptor is a small declarative document from which a channel is
//! constructed and validated. Whitespace and key order are normalized before
//! hashing, so a descriptor's hash identifies its parsed content.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::capacity::WeylDiagonalChannel;
use crate::channel::{
    tensor_with_cap, DiagonalUnitalChannel, ProductChannel, QuantumChannel, QubitAffineChannel,
};
use crate::density::DensityMatrix;
use crate::error::{QhswError, Result};
use crate::linalg::CMatrix;
use crate::tol::PRODUCT_DIM_CAP;

/// One multiplier of a diagonal channel, keyed by its shift-clock labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaEntry {
    pub a: usize,
    pub b: usize,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Declarative description of a channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelDescriptor {
    /// Channel rescaling each shift-clock coefficient by a multiplier;
    /// omitted labels default to zero, (0, 0) is fixed at one.
    DiagonalUnital { d: usize, lambda: Vec<LambdaEntry> },
    /// Qubit channel acting on the Bloch vector as w -> t + diag(lambda) w.
    QubitAffine { t: [f64; 3], lambda: [f64; 3] },
    /// Tensor product of diagonal factors.
    Product { factors: Vec<ChannelDescriptor> },
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A descriptor file: the channel plus an optional marker that validation is
/// expected to fail, used by fixtures exercising the rejection paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    #[serde(flatten)]
    pub channel: ChannelDescriptor,
    #[serde(default, skip_serializing_if = "is_false")]
    pub expected_failure: bool,
}

impl From<ChannelDescriptor> for ChannelDocument {
    fn from(channel: ChannelDescriptor) -> Self {
        Self {
            channel,
            expected_failure: false,
        }
    }
}

/// Parses a descriptor document, keeping the serde error so callers can
/// report the offending line and column.
pub fn parse_channel_document(
    text: &str,
) -> std::result::Result<ChannelDocument, serde_json::Error> {
    serde_json::from_str(text)
}

/// A constructed channel, one variant per descriptor type.
#[derive(Clone, Debug)]
pub enum BuiltChannel {
    Diagonal(DiagonalUnitalChannel),
    Affine(QubitAffineChannel),
    Product(ProductChannel),
}

impl BuiltChannel {
    pub fn as_quantum_channel(&self) -> &dyn QuantumChannel {
        match self {
            BuiltChannel::Diagonal(ch) => ch,
            BuiltChannel::Affine(ch) => ch,
            BuiltChannel::Product(ch) => ch,
        }
    }

    /// The channel as a capacity-bearing diagonal channel, when it is one.
    pub fn as_weyl_diagonal(&self) -> Option<&dyn WeylDiagonalChannel> {
        match self {
            BuiltChannel::Diagonal(ch) => Some(ch),
            BuiltChannel::Product(ch) => Some(ch),
            BuiltChannel::Affine(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.as_quantum_channel().dim()
    }
}

impl ChannelDescriptor {
    /// Hilbert space dimension the descriptor declares, before construction.
    pub fn declared_dim(&self) -> usize {
        match self {
            ChannelDescriptor::DiagonalUnital { d, .. } => *d,
            ChannelDescriptor::QubitAffine { .. } => 2,
            ChannelDescriptor::Product { factors } => {
                factors.iter().map(|f| f.declared_dim()).product()
            }
        }
    }

    /// Constructs and validates the channel. With `allow_non_cp` the complete
    /// positivity check is skipped for single channels so that rejected
    /// descriptors can still be inspected; products always validate.
    pub fn build(&self, allow_non_cp: bool) -> Result<BuiltChannel> {
        self.build_with_cap(allow_non_cp, PRODUCT_DIM_CAP)
    }

    /// Same as [`build`](Self::build) with an explicit product dimension cap.
    pub fn build_with_cap(&self, allow_non_cp: bool, cap: usize) -> Result<BuiltChannel> {
        match self {
            ChannelDescriptor::DiagonalUnital { d, lambda } => {
                let entries: Vec<((usize, usize), Complex64)> = lambda
                    .iter()
                    .map(|e| ((e.a, e.b), Complex64::new(e.re, e.im)))
                    .collect();
                let ch = if allow_non_cp {
                    DiagonalUnitalChannel::new_without_cp_check(*d, &entries)?
                } else {
                    DiagonalUnitalChannel::new(*d, &entries)?
                };
                Ok(BuiltChannel::Diagonal(ch))
            }
            ChannelDescriptor::QubitAffine { t, lambda } => {
                let ch = if allow_non_cp {
                    QubitAffineChannel::new_without_cp_check(*t, *lambda)
                } else {
                    QubitAffineChannel::new(*t, *lambda)?
                };
                Ok(BuiltChannel::Affine(ch))
            }
            ChannelDescriptor::Product { factors } => {
                let mut flat = Vec::new();
                collect_diagonal_factors(factors, &mut flat)?;
                Ok(BuiltChannel::Product(tensor_with_cap(flat, cap)?))
            }
        }
    }

    /// Canonical serialization: our field order, no extra whitespace.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization cannot fail")
    }

    /// SHA-256 of the canonical serialization, as lowercase hex.
    pub fn sha256_hex(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// Flattens nested products into a list of diagonal factors.
fn collect_diagonal_factors(
    factors: &[ChannelDescriptor],
    out: &mut Vec<DiagonalUnitalChannel>,
) -> Result<()> {
    for f in factors {
        match f {
            ChannelDescriptor::DiagonalUnital { d, lambda } => {
                let entries: Vec<((usize, usize), Complex64)> = lambda
                    .iter()
                    .map(|e| ((e.a, e.b), Complex64::new(e.re, e.im)))
                    .collect();
                out.push(DiagonalUnitalChannel::new(*d, &entries)?);
            }
            ChannelDescriptor::Product { factors } => {
                collect_diagonal_factors(factors, out)?;
            }
            ChannelDescriptor::QubitAffine { .. } => {
                return Err(QhswError::InvalidChannel(
                    "product factors must act diagonally on the shift-clock basis".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Descriptor of an existing diagonal channel, multipliers in label order.
pub fn describe_diagonal(ch: &DiagonalUnitalChannel) -> ChannelDescriptor {
    let d = ch.dim();
    let mut lambda = Vec::new();
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            let l = ch.lambda(a, b);
            if l.norm() > 0.0 {
                lambda.push(LambdaEntry {
                    a,
                    b,
                    re: l.re,
                    im: l.im,
                });
            }
        }
    }
    ChannelDescriptor::DiagonalUnital { d, lambda }
}

/// Descriptor of an existing product channel, factor by factor.
pub fn describe_product(ch: &ProductChannel) -> ChannelDescriptor {
    ChannelDescriptor::Product {
        factors: ch.factors().iter().map(describe_diagonal).collect(),
    }
}

/// A density matrix as flat row-major real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPayload {
    pub d: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl DensityPayload {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let z = rho.matrix()[(r, c)];
                re.push(z.re);
                im.push(z.im);
            }
        }
        Self { d, re, im }
    }

    /// Reconstructs and validates the state.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        if self.d == 0 {
            return Err(QhswError::InvalidDimension {
                got: 0,
                reason: "density payload must have positive dimension".into(),
            });
        }
        if self.re.len() != self.d * self.d || self.im.len() != self.d * self.d {
            return Err(QhswError::InvalidState(format!(
                "density payload for dimension {} needs {} entries, got {} real and {} imaginary",
                self.d,
                self.d * self.d,
                self.re.len(),
                self.im.len()
            )));
        }
        let m = CMatrix::from_fn(self.d, self.d, |r, c| {
            Complex64::new(self.re[r * self.d + c], self.im[r * self.d + c])
        });
        DensityMatrix::new(m)
    }
}
