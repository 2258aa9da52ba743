//! Line-oriented catalogue files.
//!
//! A file is a sequence of `key value...` lines; `#` starts a comment
//! and blank lines are ignored. Scalars use the exact literal grammar
//! and must be written without internal whitespace. Two layouts exist,
//! selected by `provenance`:
//!
//! ```text
//! schema 1
//! n 3
//! field 3
//! provenance ellipsoid
//! alpha 2-sqrt(3)
//! alpha 1
//! alpha sqrt(3)
//! ```
//!
//! ```text
//! schema 1
//! n 2
//! field 1
//! provenance user
//! orbit A action 1 reoccurring true
//! block rotation 3/2
//! ```
//!
//! `block` lines attach to the most recent `orbit`. Emission is
//! canonical (scalars in canonical form, single spaces, `\n` endings),
//! so `emit . parse . emit = emit` byte for byte.

use std::fmt;

use czjump_core::analyzer::{ellipsoid_catalogue, OrbitCatalogue, Provenance};
use czjump_core::index::{OrbitSpectrum, TransverseBlock};
use czjump_core::scalar::{ExactScalar, PiMultiple};

#[derive(Debug)]
pub struct CatalogueError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for CatalogueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for CatalogueError {}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, CatalogueError> {
    Err(CatalogueError {
        line,
        column,
        message: message.into(),
    })
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(cut) => &raw[..cut],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut col = 0;
        for piece in body.split_whitespace() {
            let at = body[col..].find(piece).unwrap() + col;
            tokens.push((at + 1, piece));
            col = at + piece.len();
        }
        if !tokens.is_empty() {
            lines.push(Line {
                number: idx + 1,
                tokens,
            });
        }
    }
    lines
}

fn parse_scalar_field(
    line: usize,
    column: usize,
    token: &str,
    field: u64,
) -> Result<ExactScalar, CatalogueError> {
    let value = ExactScalar::parse(token)
        .map_err(|e| CatalogueError {
            line,
            column,
            message: format!("bad scalar literal: {e}"),
        })?;
    if !value.is_rational() && value.radicand() != field {
        return err(
            line,
            column,
            format!(
                "scalar lives in sqrt({}) but the catalogue field is sqrt({})",
                value.radicand(),
                field
            ),
        );
    }
    Ok(value)
}

/// Parses a catalogue file, reporting the first defect with its
/// line/column position.
pub fn parse_catalogue(text: &str) -> Result<OrbitCatalogue, CatalogueError> {
    let lines = tokenize(text);
    let mut it = lines.iter();

    let mut expect_kv = |key: &str| -> Result<(usize, usize, &str), CatalogueError> {
        match it.next() {
            Some(line) => {
                let (c0, k) = line.tokens[0];
                if k != key {
                    return err(line.number, c0, format!("expected '{key}', found '{k}'"));
                }
                if line.tokens.len() != 2 {
                    return err(line.number, c0, format!("'{key}' takes one value"));
                }
                let (c1, v) = line.tokens[1];
                Ok((line.number, c1, v))
            }
            None => err(0, 0, format!("missing '{key}' line")),
        }
    };

    let (ln, col, schema) = expect_kv("schema")?;
    if schema != "1" {
        return err(ln, col, format!("unsupported schema '{schema}'"));
    }
    let (ln, col, n_text) = expect_kv("n")?;
    let n: u32 = match n_text.parse() {
        Ok(v) if v >= 2 => v,
        _ => return err(ln, col, "n must be an integer >= 2"),
    };
    let (ln, col, field_text) = expect_kv("field")?;
    let field: u64 = match field_text.parse() {
        Ok(v) if v >= 1 => v,
        _ => return err(ln, col, "field must be a positive integer radicand"),
    };
    let (ln, col, prov) = expect_kv("provenance")?;

    match prov {
        "ellipsoid" => {
            let mut alpha = Vec::new();
            for line in it {
                let (c0, key) = line.tokens[0];
                if key != "alpha" {
                    return err(line.number, c0, format!("expected 'alpha', found '{key}'"));
                }
                if line.tokens.len() != 2 {
                    return err(line.number, c0, "'alpha' takes one scalar");
                }
                let (c1, tok) = line.tokens[1];
                alpha.push(parse_scalar_field(line.number, c1, tok, field)?);
            }
            if alpha.is_empty() {
                return err(ln, col, "empty catalogue: no alpha lines");
            }
            if alpha.len() != n as usize {
                return err(ln, col, format!("n is {n} but {} alpha lines found", alpha.len()));
            }
            ellipsoid_catalogue(&alpha).map_err(|e| CatalogueError {
                line: ln,
                column: col,
                message: e.to_string(),
            })
        }
        "user" => {
            struct Pending {
                line: usize,
                label: String,
                action: ExactScalar,
                reoccurring: bool,
                blocks: Vec<TransverseBlock>,
            }
            let mut pending: Vec<Pending> = Vec::new();
            for line in it {
                let (c0, key) = line.tokens[0];
                match key {
                    "orbit" => {
                        // orbit <label> action <scalar> reoccurring <bool>
                        if line.tokens.len() != 6
                            || line.tokens[2].1 != "action"
                            || line.tokens[4].1 != "reoccurring"
                        {
                            return err(
                                line.number,
                                c0,
                                "expected 'orbit <label> action <scalar> reoccurring <true|false>'",
                            );
                        }
                        let label = line.tokens[1].1.to_string();
                        let (ca, atok) = line.tokens[3];
                        let action = parse_scalar_field(line.number, ca, atok, field)?;
                        let (cr, rtok) = line.tokens[5];
                        let reoccurring = match rtok {
                            "true" => true,
                            "false" => false,
                            other => {
                                return err(
                                    line.number,
                                    cr,
                                    format!("reoccurring must be true or false, found '{other}'"),
                                )
                            }
                        };
                        pending.push(Pending {
                            line: line.number,
                            label,
                            action,
                            reoccurring,
                            blocks: Vec::new(),
                        });
                    }
                    "block" => {
                        let Some(current) = pending.last_mut() else {
                            return err(line.number, c0, "block line before any orbit line");
                        };
                        if line.tokens.len() < 2 {
                            return err(line.number, c0, "block needs a kind");
                        }
                        let (ck, kind) = line.tokens[1];
                        let block = match kind {
                            "rotation" => {
                                if line.tokens.len() != 3 {
                                    return err(line.number, ck, "rotation takes one scalar");
                                }
                                let (cs, tok) = line.tokens[2];
                                TransverseBlock::Rotation(parse_scalar_field(
                                    line.number,
                                    cs,
                                    tok,
                                    field,
                                )?)
                            }
                            "trivial+" => TransverseBlock::TrivialPlus,
                            "trivial-" => TransverseBlock::TrivialMinus,
                            "hyperbolic+" => TransverseBlock::HyperbolicPos,
                            "hyperbolic-" => TransverseBlock::HyperbolicNeg,
                            other => {
                                return err(line.number, ck, format!("unknown block kind '{other}'"))
                            }
                        };
                        if line.tokens.len() > 3 || (line.tokens.len() == 3 && kind != "rotation") {
                            return err(line.number, ck, "unexpected tokens after block kind");
                        }
                        current.blocks.push(block);
                    }
                    other => {
                        return err(line.number, c0, format!("expected 'orbit' or 'block', found '{other}'"))
                    }
                }
            }
            if pending.is_empty() {
                return err(ln, col, "empty catalogue: no orbit lines");
            }
            let mut orbits = Vec::with_capacity(pending.len());
            for p in pending {
                let spec = OrbitSpectrum::new(
                    p.label,
                    p.blocks,
                    PiMultiple::new(p.action),
                    p.reoccurring,
                )
                .map_err(|e| CatalogueError {
                    line: p.line,
                    column: 1,
                    message: e.to_string(),
                })?;
                orbits.push(spec);
            }
            OrbitCatalogue::new(n, orbits, Provenance::User, false).map_err(|e| CatalogueError {
                line: ln,
                column: col,
                message: e.to_string(),
            })
        }
        other => err(ln, col, format!("provenance must be 'ellipsoid' or 'user', found '{other}'")),
    }
}

/// Canonical emission; see the module header for the shape.
pub fn emit_catalogue(catalogue: &OrbitCatalogue) -> String {
    let mut out = String::new();
    out.push_str("schema 1\n");
    out.push_str(&format!("n {}\n", catalogue.n));
    let field = catalogue_field(catalogue);
    out.push_str(&format!("field {field}\n"));
    match &catalogue.provenance {
        Provenance::Ellipsoid { alpha } => {
            out.push_str("provenance ellipsoid\n");
            for a in alpha {
                out.push_str(&format!("alpha {a}\n"));
            }
        }
        Provenance::User => {
            out.push_str("provenance user\n");
            for orbit in &catalogue.orbits {
                out.push_str(&format!(
                    "orbit {} action {} reoccurring {}\n",
                    orbit.label,
                    orbit.action.coefficient(),
                    orbit.reoccurring
                ));
                for block in &orbit.blocks {
                    match block {
                        TransverseBlock::Rotation(rho) => {
                            out.push_str(&format!("block rotation {rho}\n"))
                        }
                        TransverseBlock::TrivialPlus => out.push_str("block trivial+\n"),
                        TransverseBlock::TrivialMinus => out.push_str("block trivial-\n"),
                        TransverseBlock::HyperbolicPos => out.push_str("block hyperbolic+\n"),
                        TransverseBlock::HyperbolicNeg => out.push_str("block hyperbolic-\n"),
                    }
                }
            }
        }
    }
    out
}

/// Radicand shared by the catalogue's scalars (1 when fully rational).
pub fn catalogue_field(catalogue: &OrbitCatalogue) -> u64 {
    let mut field = 1;
    let mut consider = |s: &ExactScalar| {
        if !s.is_rational() {
            field = s.radicand();
        }
    };
    for orbit in &catalogue.orbits {
        consider(orbit.action.coefficient());
        for b in &orbit.blocks {
            if let TransverseBlock::Rotation(rho) = b {
                consider(rho);
            }
        }
    }
    field
}
