//! The line-oriented instance-file format.
//!
//! ```text
//! # comments run to end of line; blank lines are ignored
//! ring x y              # variable names; must precede all blocks and tasks
//! field fp 32003        # optional: `fp <prime>` or `q`; defaults to fp 32003
//!
//! ideal I               # an ideal, one generator polynomial per `gen` line
//! gen x^2
//! gen y
//! end
//!
//! module M rank 2       # a submodule of R^2; each `gen` line is one
//! gen x, 0              # generator column, entries comma-separated
//! gen 0, y
//! end
//!
//! endo P rank 2         # a square matrix over R, one `row` line per row
//! row y, x
//! row x, y
//! end
//!
//! task colength I       # tasks name a command and the objects it reads
//! task koszul-chi P
//! ```
//!
//! Polynomial syntax: integer coefficients, the declared variable names, and
//! the operators `+ - * ^` (no parentheses, no juxtaposition), e.g.
//! `3*x^2*y - y^3`.

use std::fmt;

use brmult_core::koszul::Endo;
use brmult_core::localring::{parse_poly, MIdeal, Poly};
use brmult_core::scalar::FieldSpec;
use brmult_core::submod::Submodule;

/// A diagnostic pointing at a position in the instance text (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diag {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diag {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Diag { line, col, message: message.into() }
    }
}

impl fmt::Display for Diag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

/// Raw parsed data of a named block; realization into kernel types happens
/// at dispatch time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectData {
    Ideal { gens: Vec<Poly> },
    Module { rank: usize, gens: Vec<Vec<Poly>> },
    Endo { rank: usize, rows: Vec<Vec<Poly>> },
}

/// One `task` line.  The source line is kept for later diagnostics but does
/// not participate in equality, so a serialize/re-parse round trip compares
/// equal.
#[derive(Clone, Debug, Eq)]
pub struct Task {
    pub line: usize,
    pub command: String,
    pub args: Vec<String>,
}

impl PartialEq for Task {
    fn eq(&self, other: &Self) -> bool {
        self.command == other.command && self.args == other.args
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub vars: Vec<String>,
    pub field: FieldSpec,
    /// Named blocks in file order.
    pub objects: Vec<(String, ObjectData)>,
    pub tasks: Vec<Task>,
}

/// Parse a field declaration in either form: file tokens (`["fp", "32003"]`
/// or `["q"]`) after joining, or the flag form `fp:<prime>` / `q`.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec, String> {
    let norm = text.trim().replace(' ', ":");
    if norm == "q" || norm == "Q" {
        return Ok(FieldSpec::Q);
    }
    match norm.strip_prefix("fp:") {
        Some(p) => {
            let p: u64 = p
                .parse()
                .map_err(|_| format!("invalid prime `{p}` in field spec"))?;
            FieldSpec::fp(p)
        }
        None => Err(format!(
            "unknown field spec `{text}`: expected `fp:<prime>` or `q`"
        )),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

enum BlockKind {
    Ideal,
    Module { rank: usize },
    Endo { rank: usize },
}

struct OpenBlock {
    kind: BlockKind,
    name: String,
    header_line: usize,
    /// Ideal generators, module generator columns, or endo rows.
    polys: Vec<Vec<Poly>>,
}

/// Split the remainder of a `gen`/`row` line on commas, keeping each entry's
/// starting byte offset within the line for error positions.
fn comma_entries(rest: &str, rest_offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut seg_start = rest_offset;
    for seg in rest.split(',') {
        out.push((seg_start, seg));
        seg_start += seg.len() + 1;
    }
    out
}

fn parse_entry(
    seg: &str,
    seg_offset: usize,
    line_no: usize,
    vars: &[String],
    field: FieldSpec,
) -> Result<Poly, Diag> {
    let trimmed = seg.trim();
    if trimmed.is_empty() {
        return Err(Diag::new(line_no, seg_offset + 1, "empty polynomial entry"));
    }
    let lead = seg.len() - seg.trim_start().len();
    parse_poly(trimmed, vars, field)
        .map_err(|e| Diag::new(line_no, seg_offset + lead + e.offset + 1, e.message))
}

/// Parse instance text; `field_override` (from `--field`) wins over the
/// file's `field` line and must therefore be known before any polynomial is
/// read, which the before-all-blocks placement rule guarantees.
pub fn parse_instance(text: &str, field_override: Option<FieldSpec>) -> Result<Instance, Diag> {
    let mut vars: Option<Vec<String>> = None;
    let mut declared_field: Option<FieldSpec> = None;
    let mut objects: Vec<(String, ObjectData)> = Vec::new();
    let mut tasks: Vec<Task> = Vec::new();
    let mut open: Option<OpenBlock> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let kw_offset = body.len() - body.trim_start().len();
        let keyword = trimmed.split_whitespace().next().unwrap();
        let rest_offset = kw_offset + keyword.len();
        let rest = &body[rest_offset..];
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();

        if let Some(block) = open.as_mut() {
            match (keyword, &block.kind) {
                ("end", _) => {
                    let block = open.take().unwrap();
                    close_block(block, &mut objects, line_no)?;
                }
                ("gen", BlockKind::Ideal) => {
                    if rest.contains(',') {
                        return Err(Diag::new(
                            line_no,
                            rest_offset + rest.find(',').unwrap() + 1,
                            "ideal generators take a single polynomial, not a comma-separated list",
                        ));
                    }
                    let g = parse_entry(
                        rest,
                        rest_offset,
                        line_no,
                        vars.as_ref().unwrap(),
                        effective_field(declared_field, field_override),
                    )?;
                    block.polys.push(vec![g]);
                }
                ("gen", BlockKind::Module { rank }) | ("row", BlockKind::Endo { rank }) => {
                    let rank = *rank;
                    let entries = comma_entries(rest, rest_offset);
                    if entries.len() != rank {
                        return Err(Diag::new(
                            line_no,
                            kw_offset + 1,
                            format!(
                                "{} `{}` declares rank {} but this line has {} entries",
                                match block.kind {
                                    BlockKind::Module { .. } => "module",
                                    _ => "endo",
                                },
                                block.name,
                                rank,
                                entries.len()
                            ),
                        ));
                    }
                    let mut row = Vec::with_capacity(rank);
                    for (off, seg) in entries {
                        row.push(parse_entry(
                            seg,
                            off,
                            line_no,
                            vars.as_ref().unwrap(),
                            effective_field(declared_field, field_override),
                        )?);
                    }
                    block.polys.push(row);
                }
                ("gen", BlockKind::Endo { .. }) => {
                    return Err(Diag::new(line_no, kw_offset + 1, "endo blocks use `row` lines"));
                }
                ("row", _) => {
                    return Err(Diag::new(line_no, kw_offset + 1, "`row` lines belong in endo blocks"));
                }
                _ => {
                    return Err(Diag::new(
                        line_no,
                        kw_offset + 1,
                        format!("unexpected `{}` inside block `{}` (expected gen/row or end)", keyword, block.name),
                    ));
                }
            }
            continue;
        }

        match keyword {
            "ring" => {
                if vars.is_some() {
                    return Err(Diag::new(line_no, kw_offset + 1, "duplicate ring declaration"));
                }
                if tokens.len() < 2 {
                    return Err(Diag::new(line_no, kw_offset + 1, "ring needs at least one variable name"));
                }
                let names: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                for (i, n) in names.iter().enumerate() {
                    if !is_identifier(n) {
                        return Err(Diag::new(line_no, kw_offset + 1, format!("invalid variable name `{n}`")));
                    }
                    if names[..i].contains(n) {
                        return Err(Diag::new(line_no, kw_offset + 1, format!("duplicate variable name `{n}`")));
                    }
                }
                vars = Some(names);
            }
            "field" => {
                if declared_field.is_some() {
                    return Err(Diag::new(line_no, kw_offset + 1, "duplicate field declaration"));
                }
                if !objects.is_empty() {
                    return Err(Diag::new(line_no, kw_offset + 1, "field must be declared before any block"));
                }
                let spec = parse_field_spec(rest.trim())
                    .map_err(|m| Diag::new(line_no, rest_offset + 1, m))?;
                declared_field = Some(spec);
            }
            "ideal" | "module" | "endo" => {
                if vars.is_none() {
                    return Err(Diag::new(line_no, kw_offset + 1, "ring must be declared before any block"));
                }
                if tokens.len() < 2 || !is_identifier(tokens[1]) {
                    return Err(Diag::new(line_no, kw_offset + 1, format!("{keyword} needs a name")));
                }
                let name = tokens[1].to_string();
                if objects.iter().any(|(n, _)| *n == name) {
                    return Err(Diag::new(line_no, kw_offset + 1, format!("duplicate object name `{name}`")));
                }
                let kind = if keyword == "ideal" {
                    if tokens.len() != 2 {
                        return Err(Diag::new(line_no, kw_offset + 1, "ideal header takes only a name"));
                    }
                    BlockKind::Ideal
                } else {
                    if tokens.len() != 4 || tokens[2] != "rank" {
                        return Err(Diag::new(
                            line_no,
                            kw_offset + 1,
                            format!("expected `{keyword} <name> rank <r>`"),
                        ));
                    }
                    let rank: usize = tokens[3].parse().map_err(|_| {
                        Diag::new(line_no, kw_offset + 1, format!("invalid rank `{}`", tokens[3]))
                    })?;
                    if rank == 0 {
                        return Err(Diag::new(line_no, kw_offset + 1, "rank must be positive"));
                    }
                    if keyword == "module" {
                        BlockKind::Module { rank }
                    } else {
                        BlockKind::Endo { rank }
                    }
                };
                open = Some(OpenBlock { kind, name, header_line: line_no, polys: Vec::new() });
            }
            "task" => {
                if vars.is_none() {
                    return Err(Diag::new(line_no, kw_offset + 1, "ring must be declared before any task"));
                }
                if tokens.len() < 2 {
                    return Err(Diag::new(line_no, kw_offset + 1, "task needs a command"));
                }
                let command = tokens[1].to_string();
                if !crate::COMMANDS.contains(&command.as_str()) {
                    return Err(Diag::new(
                        line_no,
                        kw_offset + 1,
                        format!("unknown task command `{command}`"),
                    ));
                }
                tasks.push(Task {
                    line: line_no,
                    command,
                    args: tokens[2..].iter().map(|s| s.to_string()).collect(),
                });
            }
            "end" => {
                return Err(Diag::new(line_no, kw_offset + 1, "`end` outside of any block"));
            }
            "gen" | "row" => {
                return Err(Diag::new(line_no, kw_offset + 1, format!("`{keyword}` outside of any block")));
            }
            other => {
                return Err(Diag::new(line_no, kw_offset + 1, format!("unknown directive `{other}`")));
            }
        }
    }

    if let Some(block) = open {
        return Err(Diag::new(
            block.header_line,
            1,
            format!("block `{}` is never closed (missing `end`)", block.name),
        ));
    }
    let Some(vars) = vars else {
        return Err(Diag::new(1, 1, "missing ring declaration"));
    };

    let instance = Instance {
        vars,
        field: effective_field(declared_field, field_override),
        objects,
        tasks,
    };
    for task in &instance.tasks {
        for arg in &task.args {
            if instance.get(arg).is_none() {
                return Err(Diag::new(
                    task.line,
                    1,
                    format!("task `{}` references unknown object `{}`", task.command, arg),
                ));
            }
        }
    }
    Ok(instance)
}

fn effective_field(declared: Option<FieldSpec>, overridden: Option<FieldSpec>) -> FieldSpec {
    overridden.or(declared).unwrap_or_default()
}

fn close_block(
    block: OpenBlock,
    objects: &mut Vec<(String, ObjectData)>,
    end_line: usize,
) -> Result<(), Diag> {
    if block.polys.is_empty() {
        return Err(Diag::new(
            end_line,
            1,
            format!("block `{}` has no generators", block.name),
        ));
    }
    let data = match block.kind {
        BlockKind::Ideal => ObjectData::Ideal {
            gens: block.polys.into_iter().map(|mut v| v.pop().unwrap()).collect(),
        },
        BlockKind::Module { rank } => ObjectData::Module { rank, gens: block.polys },
        BlockKind::Endo { rank } => {
            if block.polys.len() != rank {
                return Err(Diag::new(
                    end_line,
                    1,
                    format!(
                        "endo `{}` declares rank {} but has {} rows",
                        block.name,
                        rank,
                        block.polys.len()
                    ),
                ));
            }
            ObjectData::Endo { rank, rows: block.polys }
        }
    };
    objects.push((block.name, data));
    Ok(())
}

impl Instance {
    pub fn d(&self) -> usize {
        self.vars.len()
    }

    pub fn get(&self, name: &str) -> Option<&ObjectData> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    /// Realize a named ideal block.
    pub fn ideal(&self, name: &str) -> Result<MIdeal, String> {
        match self.get(name) {
            Some(ObjectData::Ideal { gens }) => {
                Ok(MIdeal::new(self.d(), self.field, gens.clone()))
            }
            Some(_) => Err(format!("`{name}` is not an ideal")),
            None => Err(format!("unknown object `{name}`")),
        }
    }

    /// Realize a named module; an ideal block doubles as a rank-1 module.
    pub fn module(&self, name: &str) -> Result<Submodule, String> {
        match self.get(name) {
            Some(ObjectData::Module { rank, gens }) => {
                Ok(Submodule::new(self.d(), self.field, *rank, gens.clone()))
            }
            Some(ObjectData::Ideal { gens }) => Ok(Submodule::from_ideal(&MIdeal::new(
                self.d(),
                self.field,
                gens.clone(),
            ))),
            Some(_) => Err(format!("`{name}` is not a module or ideal")),
            None => Err(format!("unknown object `{name}`")),
        }
    }

    pub fn endo(&self, name: &str) -> Result<Endo, String> {
        match self.get(name) {
            Some(ObjectData::Endo { rank: _, rows }) => {
                Ok(Endo::new(self.d(), self.field, rows.clone()))
            }
            Some(_) => Err(format!("`{name}` is not an endo")),
            None => Err(format!("unknown object `{name}`")),
        }
    }

    /// Render a polynomial with this instance's variable names, in a form
    /// `parse_poly` accepts again.
    pub fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let terms: Vec<_> = p.terms().collect();
        for (i, (mono, coeff)) in terms.iter().rev().enumerate() {
            let cs = coeff.to_string();
            let (negative, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut parts = Vec::new();
            if mag != "1" || mono.degree() == 0 {
                parts.push(mag);
            }
            for (j, &e) in mono.exponents.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[j].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[j], e)),
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }

    /// Canonical text form; `parse_instance(to_text(i), None)` equals `i`
    /// when `i.field` came from the file (the round-trip property).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("ring {}\n", self.vars.join(" ")));
        match self.field {
            FieldSpec::Fp(p) => out.push_str(&format!("field fp {p}\n")),
            FieldSpec::Q => out.push_str("field q\n"),
        }
        for (name, obj) in &self.objects {
            out.push('\n');
            match obj {
                ObjectData::Ideal { gens } => {
                    out.push_str(&format!("ideal {name}\n"));
                    for g in gens {
                        out.push_str(&format!("gen {}\n", self.format_poly(g)));
                    }
                }
                ObjectData::Module { rank, gens } => {
                    out.push_str(&format!("module {name} rank {rank}\n"));
                    for col in gens {
                        let entries: Vec<String> = col.iter().map(|p| self.format_poly(p)).collect();
                        out.push_str(&format!("gen {}\n", entries.join(", ")));
                    }
                }
                ObjectData::Endo { rank, rows } => {
                    out.push_str(&format!("endo {name} rank {rank}\n"));
                    for row in rows {
                        let entries: Vec<String> = row.iter().map(|p| self.format_poly(p)).collect();
                        out.push_str(&format!("row {}\n", entries.join(", ")));
                    }
                }
            }
            out.push_str("end\n");
        }
        if !self.tasks.is_empty() {
            out.push('\n');
        }
        for task in &self.tasks {
            out.push_str(&format!("task {}", task.command));
            for a in &task.args {
                out.push_str(&format!(" {a}"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# ideals and a module over k[x,y]
ring x y
field fp 32003

ideal I
gen x^2
gen y
end

module M rank 2
gen x, 0
gen 0, 3*x^2*y - y^3
end

endo P rank 2
row y, x
row x, y
end

task colength I
task koszul-chi P
";

    #[test]
    fn parses_the_sample() {
        let inst = parse_instance(SAMPLE, None).unwrap();
        assert_eq!(inst.vars, vec!["x", "y"]);
        assert_eq!(inst.field, FieldSpec::Fp(32003));
        assert_eq!(inst.objects.len(), 3);
        assert_eq!(inst.tasks.len(), 2);
        assert_eq!(inst.tasks[1].args, vec!["P"]);
        assert_eq!(inst.ideal("I").unwrap().gens().len(), 2);
        assert_eq!(inst.module("M").unwrap().ambient_rank(), 2);
        assert_eq!(inst.endo("P").unwrap().rank(), 2);
        // Ideals double as rank-1 modules.
        assert_eq!(inst.module("I").unwrap().ambient_rank(), 1);
    }

    #[test]
    fn round_trip_is_identity() {
        let inst = parse_instance(SAMPLE, None).unwrap();
        let again = parse_instance(&inst.to_text(), None).unwrap();
        assert_eq!(inst, again);
        assert_eq!(inst.to_text(), again.to_text());
    }

    #[test]
    fn rank_mismatch_names_the_module() {
        let text = "ring x y\nmodule M rank 2\ngen x, 0, y\nend\n";
        let err = parse_instance(text, None).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("module `M`"), "{err}");
        assert!(err.message.contains("rank 2"), "{err}");
        assert!(err.message.contains("3 entries"), "{err}");
    }

    #[test]
    fn syntax_error_points_at_the_caret() {
        let text = "ring x y\nideal I\ngen y^\nend\n";
        let err = parse_instance(text, None).unwrap_err();
        assert_eq!(err.line, 3);
        // `gen y^` : the missing exponent is right after the caret at col 7.
        assert_eq!(err.col, 7);
        assert!(err.message.contains("exponent"), "{err}");
    }

    #[test]
    fn unknown_variable_is_positioned() {
        let text = "ring x y\nideal I\ngen x + z\nend\n";
        let err = parse_instance(text, None).unwrap_err();
        assert_eq!((err.line, err.col), (3, 9));
        assert!(err.message.contains("unknown variable `z`"), "{err}");
    }

    #[test]
    fn structural_errors() {
        for (text, needle) in [
            ("ideal I\ngen x\nend\n", "ring must be declared"),
            ("ring x y\nring x\n", "duplicate ring"),
            ("ring x y\nideal I\ngen x\n", "never closed"),
            ("ring x y\nideal I\ngen x\nend\nideal I\ngen y\nend\n", "duplicate object"),
            ("ring x y\nideal I\ngen x, y\nend\n", "single polynomial"),
            ("ring x y\nideal I\nend\n", "no generators"),
            ("ring x y\nendo P rank 2\nrow x, y\nend\n", "2 but has 1 rows"),
            ("ring x y\ntask colength I\n", "unknown object `I`"),
            ("ring x y\ntask frobnicate\n", "unknown task command"),
            ("ring x y\nbogus\n", "unknown directive"),
            ("ring x x\n", "duplicate variable"),
            ("ring x y\nfield fp 32004\n", "not prime"),
            ("ring x y\nideal I\ngen x\nend\nfield q\n", "before any block"),
        ] {
            let err = parse_instance(text, None).unwrap_err();
            assert!(err.message.contains(needle), "`{needle}` not in `{err}` for {text:?}");
        }
    }

    #[test]
    fn field_override_wins() {
        let inst = parse_instance(SAMPLE, Some(FieldSpec::Q)).unwrap();
        assert_eq!(inst.field, FieldSpec::Q);
        assert_eq!(inst.ideal("I").unwrap().field(), FieldSpec::Q);
    }

    #[test]
    fn field_spec_forms() {
        assert_eq!(parse_field_spec("q").unwrap(), FieldSpec::Q);
        assert_eq!(parse_field_spec("fp:32003").unwrap(), FieldSpec::Fp(32003));
        assert_eq!(parse_field_spec("fp 32003").unwrap(), FieldSpec::Fp(32003));
        assert!(parse_field_spec("fp:4").is_err());
        assert!(parse_field_spec("gf(9)").is_err());
    }

    #[test]
    fn comments_and_negative_coefficients_survive() {
        let text = "ring x y\nideal J\ngen x - 2*y # tangent\nend\ntask colength J\n";
        let inst = parse_instance(text, None).unwrap();
        let shown = inst.to_text();
        // -2 over F_32003 is the canonical residue 32001.
        assert!(shown.contains("gen x + 32001*y"), "{shown}");
        let again = parse_instance(&shown, None).unwrap();
        assert_eq!(inst, again);
    }
}
