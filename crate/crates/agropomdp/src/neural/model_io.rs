//! Model file format, version 1.
//!
//! Layout: a text prologue, a blank line, then a binary payload.
//!
//! ```text
//! AGROPOMDP-MODEL v1
//! gru 10 64                 (optional, at most one, must come first)
//! dense 64 256 relu
//! dense 256 21 identity
//!                           (blank line terminates the descriptor)
//! <parameters as little-endian f64, flattened row-major, declaration order>
//! ```
//!
//! GRU parameter order: w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h. Dense
//! layers store the weight matrix then the bias. The payload length must
//! match the descriptor exactly; nothing is inferred from the byte count.

use std::path::Path;

use super::gru::{GruCell, RecurrentQNetwork};
use super::mlp::{Activation, Layer, MlpNetwork};
use super::Parameterized;
use crate::error::{Error, Result};
use crate::fsutil::atomic_write;

const HEADER: &str = "AGROPOMDP-MODEL v1";

/// Either supported action-value architecture, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub enum QNetworkModel {
    Feedforward(MlpNetwork),
    Recurrent(RecurrentQNetwork),
}

impl QNetworkModel {
    pub fn input_dim(&self) -> usize {
        match self {
            QNetworkModel::Feedforward(n) => n.input_dim(),
            QNetworkModel::Recurrent(n) => n.input_dim(),
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            QNetworkModel::Feedforward(n) => n.output_dim(),
            QNetworkModel::Recurrent(n) => n.output_dim(),
        }
    }

    pub fn is_recurrent(&self) -> bool {
        matches!(self, QNetworkModel::Recurrent(_))
    }

    fn tensors(&self) -> Vec<&[f64]> {
        match self {
            QNetworkModel::Feedforward(n) => (0..n.tensor_count()).map(|i| n.tensor(i)).collect(),
            QNetworkModel::Recurrent(n) => (0..n.tensor_count()).map(|i| n.tensor(i)).collect(),
        }
    }
}

impl From<MlpNetwork> for QNetworkModel {
    fn from(n: MlpNetwork) -> Self {
        QNetworkModel::Feedforward(n)
    }
}

impl From<RecurrentQNetwork> for QNetworkModel {
    fn from(n: RecurrentQNetwork) -> Self {
        QNetworkModel::Recurrent(n)
    }
}

pub fn encode_model(model: &QNetworkModel) -> Vec<u8> {
    let mut text = String::new();
    text.push_str(HEADER);
    text.push('\n');
    match model {
        QNetworkModel::Feedforward(net) => {
            for layer in net.layers() {
                descriptor_line(&mut text, layer);
            }
        }
        QNetworkModel::Recurrent(net) => {
            let gru = net.gru();
            text.push_str(&format!("gru {} {}\n", gru.input_dim(), gru.hidden_dim()));
            for layer in net.head().layers() {
                descriptor_line(&mut text, layer);
            }
        }
    }
    text.push('\n');

    let mut bytes = text.into_bytes();
    for tensor in model.tensors() {
        for v in tensor {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    bytes
}

fn descriptor_line(text: &mut String, layer: &Layer) {
    text.push_str(&format!(
        "dense {} {} {}\n",
        layer.in_dim(),
        layer.out_dim(),
        layer.activation().name()
    ));
}

/// Structure parsed from the descriptor before any payload is touched.
struct Descriptor {
    gru: Option<(usize, usize)>,
    dense: Vec<(usize, usize, Activation)>,
}

impl Descriptor {
    /// Total parameter count, with overflow treated as malformed input so
    /// absurd dimensions fail before any allocation.
    fn parameter_count(&self) -> Result<usize> {
        let overflow = || Error::Data("descriptor dimensions overflow".into());
        let mut total: usize = 0;
        let mut add = |n: usize| -> Result<()> {
            total = total.checked_add(n).ok_or_else(overflow)?;
            Ok(())
        };
        if let Some((input, hidden)) = self.gru {
            let wi = hidden.checked_mul(input).ok_or_else(overflow)?;
            let hh = hidden.checked_mul(hidden).ok_or_else(overflow)?;
            for _ in 0..3 {
                add(wi)?;
                add(hh)?;
                add(hidden)?;
            }
        }
        for &(i, o, _) in &self.dense {
            add(i.checked_mul(o).ok_or_else(|| overflow())?)?;
            add(o)?;
        }
        Ok(total)
    }
}

pub fn decode_model(bytes: &[u8]) -> Result<QNetworkModel> {
    let sep = find_blank_line(bytes)
        .ok_or_else(|| Error::Data("missing blank line after architecture descriptor".into()))?;
    let text = std::str::from_utf8(&bytes[..sep])
        .map_err(|_| Error::Data("descriptor is not valid UTF-8".into()))?;
    let payload = &bytes[sep + 2..];

    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header != HEADER {
        return Err(Error::Data(format!(
            "unsupported model header {header:?}, expected {HEADER:?}"
        )));
    }

    let desc = parse_descriptor(lines)?;
    let expected = desc
        .parameter_count()?
        .checked_mul(8)
        .ok_or_else(|| Error::Data("descriptor dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(Error::Data(format!(
            "payload holds {} bytes but the descriptor requires {expected}",
            payload.len()
        )));
    }

    let mut reader = PayloadReader { payload, pos: 0 };
    let model = build_model(&desc, &mut reader)?;
    debug_assert_eq!(reader.pos, payload.len());
    Ok(model)
}

pub fn save_model(path: &Path, model: &QNetworkModel) -> Result<()> {
    atomic_write(path, &encode_model(model))
}

pub fn load_model(path: &Path) -> Result<QNetworkModel> {
    let bytes = std::fs::read(path)?;
    decode_model(&bytes).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn find_blank_line(bytes: &[u8]) -> Option<usize> {
    bytes.windows(2).position(|w| w == b"\n\n")
}

fn parse_descriptor<'a>(lines: impl Iterator<Item = &'a str>) -> Result<Descriptor> {
    let mut desc = Descriptor { gru: None, dense: Vec::new() };
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["gru", input, hidden] => {
                if desc.gru.is_some() {
                    return Err(Error::Data("multiple gru lines in descriptor".into()));
                }
                if !desc.dense.is_empty() {
                    return Err(Error::Data("gru line must precede dense layers".into()));
                }
                desc.gru = Some((parse_dim(input, idx)?, parse_dim(hidden, idx)?));
            }
            ["dense", i, o, act] => {
                let activation = match *act {
                    "relu" => Activation::Relu,
                    "identity" => Activation::Identity,
                    other => {
                        return Err(Error::Data(format!(
                            "unknown activation {other:?} in descriptor line {}",
                            idx + 2
                        )))
                    }
                };
                desc.dense.push((parse_dim(i, idx)?, parse_dim(o, idx)?, activation));
            }
            [] => return Err(Error::Data("empty descriptor line".into())),
            [kind, ..] => {
                return Err(Error::Data(format!(
                    "unknown layer kind {kind:?} in descriptor line {}",
                    idx + 2
                )))
            }
        }
    }
    if desc.dense.is_empty() {
        return Err(Error::Data("descriptor declares no dense layers".into()));
    }
    Ok(desc)
}

fn parse_dim(field: &str, line_idx: usize) -> Result<usize> {
    let value: usize = field.parse().map_err(|_| {
        Error::Data(format!("bad dimension {field:?} in descriptor line {}", line_idx + 2))
    })?;
    if value == 0 {
        return Err(Error::Data(format!(
            "zero dimension in descriptor line {}",
            line_idx + 2
        )));
    }
    Ok(value)
}

struct PayloadReader<'a> {
    payload: &'a [u8],
    pos: usize,
}

impl PayloadReader<'_> {
    /// Length is pre-validated, so this never runs past the end.
    fn take(&mut self, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let chunk: [u8; 8] = self.payload[self.pos..self.pos + 8].try_into().expect("8 bytes");
            out.push(f64::from_le_bytes(chunk));
            self.pos += 8;
        }
        out
    }
}

fn build_model(desc: &Descriptor, reader: &mut PayloadReader) -> Result<QNetworkModel> {
    let gru = match desc.gru {
        Some((input, hidden)) => {
            let wi = hidden * input;
            let hh = hidden * hidden;
            let tensors = [
                reader.take(wi),
                reader.take(hh),
                reader.take(hidden),
                reader.take(wi),
                reader.take(hh),
                reader.take(hidden),
                reader.take(wi),
                reader.take(hh),
                reader.take(hidden),
            ];
            Some(GruCell::from_tensors(input, hidden, tensors)?)
        }
        None => None,
    };

    let mut layers = Vec::with_capacity(desc.dense.len());
    for &(i, o, act) in &desc.dense {
        let weights = reader.take(i * o);
        let bias = reader.take(o);
        layers.push(Layer::new(i, o, weights, bias, act)?);
    }
    let mlp = MlpNetwork::from_layers(layers)?;

    match gru {
        Some(cell) => Ok(QNetworkModel::Recurrent(RecurrentQNetwork::from_parts(cell, mlp)?)),
        None => Ok(QNetworkModel::Feedforward(mlp)),
    }
}
