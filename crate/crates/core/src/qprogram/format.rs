//! Program file format (JSON).
//!
//! ```json
//! {
//!   "format": "qqlab-program/1",
//!   "work": 2, "query_width": 1,
//!   "prelude": [ { "targets": [1], "matrix": [["7.0710678118654757e-1", "0.0000000000000000e0"], …] } ],
//!   "rounds": [ [ …gates… ], … ],
//!   "output_region": [1]
//! }
//! ```
//!
//! Matrix entries are row-major `[re, im]` pairs written with 17 significant
//! digits, which round-trips `f64` exactly.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::QueryProgram;
use crate::error::{Error, Result};
use crate::qsim::{LocalUnitary, QubitLayout, BASIS_QUBIT_CAP};
use crate::scalar::Scalar;

pub const PROGRAM_FORMAT: &str = "qqlab-program/1";

#[derive(Serialize, Deserialize)]
struct ProgramFile {
    format: String,
    work: usize,
    query_width: usize,
    prelude: Vec<GateFile>,
    rounds: Vec<Vec<GateFile>>,
    output_region: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GateFile {
    targets: Vec<usize>,
    matrix: Vec<[String; 2]>,
}

fn gate_out<F: Scalar>(u: &LocalUnitary<F>) -> GateFile {
    GateFile {
        targets: u.targets().to_vec(),
        matrix: u
            .matrix()
            .iter()
            .map(|z| [format!("{:.16e}", z.re.as_f64()), format!("{:.16e}", z.im.as_f64())])
            .collect(),
    }
}

fn gate_in<F: Scalar>(g: GateFile) -> Result<LocalUnitary<F>> {
    let parse = |s: &str| -> Result<F> {
        s.parse::<f64>()
            .map(F::of)
            .map_err(|_| Error::Parse { line: 0, message: format!("bad matrix entry {s:?}") })
    };
    let matrix = g.matrix.iter().map(|[re, im]| Ok(Complex::new(parse(re)?, parse(im)?))).collect::<Result<_>>()?;
    LocalUnitary::new(g.targets, matrix)
}

pub fn write_program<F: Scalar>(prog: &QueryProgram<F>) -> String {
    let file = ProgramFile {
        format: PROGRAM_FORMAT.into(),
        work: prog.layout().work(),
        query_width: prog.layout().query_width(),
        prelude: prog.prelude().iter().map(gate_out).collect(),
        rounds: prog.rounds().iter().map(|r| r.iter().map(gate_out).collect()).collect(),
        output_region: prog.output_region().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("program serializes");
    text.push('\n');
    text
}

/// Parse a program file. The layout is admitted up to the basis-tracking
/// cap; dense simulation still enforces the dense cap when it allocates.
pub fn parse_program<F: Scalar>(text: &str) -> Result<QueryProgram<F>> {
    let file: ProgramFile = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    if file.format != PROGRAM_FORMAT {
        return Err(Error::Parse { line: 0, message: format!("unsupported format {:?}", file.format) });
    }
    let layout = QubitLayout::with_cap(file.work, file.query_width, BASIS_QUBIT_CAP)?;
    let prelude = file.prelude.into_iter().map(gate_in).collect::<Result<_>>()?;
    let rounds = file
        .rounds
        .into_iter()
        .map(|r| r.into_iter().map(gate_in).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    QueryProgram::new(layout, prelude, rounds, file.output_region)
}
