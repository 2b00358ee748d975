//! Line-oriented session files: ring and object declarations, global
//! options, assumption flags, and an ordered list of tasks.
//!
//! A session opens with a `format 1` header line. `#` starts a comment and
//! blank lines are skipped. Declarations bind names in a single flat
//! namespace; a task may only reference names declared above it.
//!
//! ```text
//! format 1
//! ring R space x,y,z over QQ order local
//! poly f = x*y^2 + z^2
//! ideal I = [y, z]
//! task j_invariant f I
//! ```
//!
//! Supported lines:
//! - `ring <name> space x,y,z [params t] [over QQ|FP:<p>] [order local|global]`
//! - `quotient [f1, ...]` — replaces the current ring by its quotient
//! - `dim <n>` — overrides the dimension used by the multiplicity samplers
//! - `poly <name> = <expr>`
//! - `ideal <name> = [e1, ...]`
//! - `module <name> = [[a1, ...], [b1, ...]]` — one bracketed row per generator
//! - `points <name> = (a,b,c); (d,e,f)` — tuples of scalar coordinates
//! - `germ <name> = (c1, ..., ck) from u,v` — map germ into the current ring
//! - `family <name> M=<module> N=<module> [points=<points>]`
//! - `assume <text>` — echoed into every task report
//! - `option seed=<u64> nmax=<n> output=text|json max_colength=<u64> field=<f>`
//! - `task <op> <args...>`
//!
//! Comma-separated lists must not contain spaces around items of the `ring`
//! line; bracketed expression lists may use any spacing.

use crate::free::FreeElement;
use crate::germs::MapGerm;
use crate::parse::{parse_polynomial, split_top_level};
use crate::polar::FamilySpec;
use crate::poly::Polynomial;
use crate::ring::{Ctx, CtxExt, RingContext};
use crate::scalar::{Field, Scalar};
use crate::submodule::Submodule;
use std::collections::HashMap;
use std::fmt;

/// A session-file error with its 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionError {
    pub line: usize,
    pub message: String,
}

impl SessionError {
    fn new(line: usize, message: impl Into<String>) -> SessionError {
        SessionError { line, message: message.into() }
    }
}

impl fmt::Display for SessionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for SessionError {}

/// Options set by `option` lines; command-line flags take precedence.
#[derive(Debug, Clone, Default)]
pub struct SessionOptions {
    pub seed: Option<u64>,
    pub n_max: Option<usize>,
    pub json: Option<bool>,
    pub budget: Option<u64>,
}

/// A parsed session: tasks in declaration order, resolved against the
/// declarations above them, plus options and asserted hypotheses.
#[derive(Debug)]
pub struct Session {
    pub options: SessionOptions,
    pub assumptions: Vec<String>,
    pub tasks: Vec<Task>,
}

/// One task with its source line and resolved inputs.
#[derive(Debug)]
pub struct Task {
    pub id: usize,
    pub line: usize,
    pub op: TaskOp,
}

/// A fully resolved task. Each variant keeps the names it was declared with
/// so reports can echo them.
#[derive(Debug)]
pub enum TaskOp {
    /// Samuel multiplicity for ideals, Buchsbaum–Rim for higher rank.
    Multiplicity { name: String, m: Submodule },
    Colength { name: String, m: Submodule },
    QuotientLength { mname: String, nname: String, m: Submodule, n: Submodule },
    Pair { mname: String, nname: String, m: Submodule, n: Submodule },
    ReductionCheck { mname: String, nname: String, m: Submodule, n: Submodule },
    PerturbationCount { name: String, m: Submodule },
    PerturbationVsBr { name: String, m: Submodule },
    JInvariant { fname: String, iname: String, f: Polynomial, i: Submodule },
    PolarMult { name: String, m: Submodule, k: usize },
    PolarCheck { name: String, family: FamilySpec },
    Pellikaan {
        fname: String,
        iname: String,
        f: Polynomial,
        i: Submodule,
        family: Polynomial,
        sigma: Submodule,
        points: Vec<Vec<Scalar>>,
    },
    Pushforward { name: String, germ: MapGerm },
    Disentanglement { name: String, germ: MapGerm },
    Milnor { name: String, eqs: Vec<Polynomial> },
    OneFormIndex {
        xname: String,
        omeganame: String,
        lname: String,
        eqs: Vec<Polynomial>,
        omega: FreeElement,
        l: Polynomial,
    },
    Wf {
        xname: String,
        fname: String,
        lname: String,
        eqs: Vec<Polynomial>,
        f: Polynomial,
        l: Polynomial,
        y: Scalar,
    },
}

impl TaskOp {
    pub fn name(&self) -> &'static str {
        match self {
            TaskOp::Multiplicity { .. } => "multiplicity",
            TaskOp::Colength { .. } => "colength",
            TaskOp::QuotientLength { .. } => "quotient_length",
            TaskOp::Pair { .. } => "pair",
            TaskOp::ReductionCheck { .. } => "reduction_check",
            TaskOp::PerturbationCount { .. } => "perturbation_count",
            TaskOp::PerturbationVsBr { .. } => "perturbation_vs_br",
            TaskOp::JInvariant { .. } => "j_invariant",
            TaskOp::PolarMult { .. } => "polar_mult",
            TaskOp::PolarCheck { .. } => "multiplicity_polar_check",
            TaskOp::Pellikaan { .. } => "pellikaan",
            TaskOp::Pushforward { .. } => "pushforward",
            TaskOp::Disentanglement { .. } => "disentanglement",
            TaskOp::Milnor { .. } => "milnor",
            TaskOp::OneFormIndex { .. } => "one_form_index",
            TaskOp::Wf { .. } => "wf",
        }
    }
}

#[derive(Clone)]
enum Decl {
    Ring,
    Poly(Polynomial),
    Module(Submodule),
    Germ(MapGerm),
    Family(FamilySpec),
    Points(Vec<Vec<Scalar>>),
}

impl Decl {
    fn kind(&self) -> &'static str {
        match self {
            Decl::Ring => "ring",
            Decl::Poly(_) => "polynomial",
            Decl::Module(_) => "ideal or module",
            Decl::Germ(_) => "germ",
            Decl::Family(_) => "family",
            Decl::Points(_) => "point list",
        }
    }
}

/// Parses `QQ` or `FP:<p>` with `p` a prime below 2^32.
pub fn parse_field(s: &str) -> Result<Field, String> {
    if s == "QQ" {
        return Ok(Field::Rat);
    }
    if let Some(p) = s.strip_prefix("FP:") {
        let p: u32 = p.parse().map_err(|_| format!("invalid prime '{p}'"))?;
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        return Ok(Field::Fp(p));
    }
    Err(format!("unknown field '{s}'; expected QQ or FP:<p>"))
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p = p as u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn ident_ok(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses an integer or fraction literal such as `-3` or `1/2`.
fn parse_scalar(field: Field, s: &str) -> Result<Scalar, String> {
    let s = s.trim();
    let bad = || format!("invalid scalar literal '{s}'");
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(format!("zero denominator in '{s}'"));
        }
        Ok(Scalar::from_ratio(field, num, den))
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(Scalar::from_i64(field, n))
    }
}

struct Parser {
    decls: HashMap<String, Decl>,
    current: Option<Ctx>,
    current_name: Option<String>,
    default_field: Field,
    field_fixed: bool,
    options: SessionOptions,
    assumptions: Vec<String>,
    tasks: Vec<Task>,
}

impl Parser {
    fn new(cli_field: Option<Field>) -> Parser {
        Parser {
            decls: HashMap::new(),
            current: None,
            current_name: None,
            default_field: cli_field.unwrap_or(Field::Rat),
            field_fixed: cli_field.is_some(),
            options: SessionOptions::default(),
            assumptions: Vec::new(),
            tasks: Vec::new(),
        }
    }

    fn bind(&mut self, ln: usize, name: &str, decl: Decl) -> Result<(), SessionError> {
        if !ident_ok(name) {
            return Err(SessionError::new(ln, format!("invalid name '{name}'")));
        }
        if self.decls.contains_key(name) {
            return Err(SessionError::new(ln, format!("name {name} already declared")));
        }
        self.decls.insert(name.to_string(), decl);
        Ok(())
    }

    fn ring(&self, ln: usize) -> Result<Ctx, SessionError> {
        self.current
            .clone()
            .ok_or_else(|| SessionError::new(ln, "no ring declared yet"))
    }

    fn lookup(&self, ln: usize, name: &str) -> Result<&Decl, SessionError> {
        self.decls
            .get(name)
            .ok_or_else(|| SessionError::new(ln, format!("undefined name {name}")))
    }

    fn get_module(&self, ln: usize, name: &str) -> Result<Submodule, SessionError> {
        match self.lookup(ln, name)? {
            Decl::Module(m) => Ok(m.clone()),
            d => Err(SessionError::new(
                ln,
                format!("name {name} is a {}, expected an ideal or module", d.kind()),
            )),
        }
    }

    fn get_ideal(&self, ln: usize, name: &str) -> Result<Submodule, SessionError> {
        let m = self.get_module(ln, name)?;
        if m.rank() != 1 {
            return Err(SessionError::new(ln, format!("name {name} must be an ideal (rank 1)")));
        }
        Ok(m)
    }

    fn get_poly(&self, ln: usize, name: &str) -> Result<Polynomial, SessionError> {
        match self.lookup(ln, name)? {
            Decl::Poly(p) => Ok(p.clone()),
            d => Err(SessionError::new(
                ln,
                format!("name {name} is a {}, expected a polynomial", d.kind()),
            )),
        }
    }

    fn get_germ(&self, ln: usize, name: &str) -> Result<MapGerm, SessionError> {
        match self.lookup(ln, name)? {
            Decl::Germ(g) => Ok(g.clone()),
            d => Err(SessionError::new(
                ln,
                format!("name {name} is a {}, expected a germ", d.kind()),
            )),
        }
    }

    fn get_family(&self, ln: usize, name: &str) -> Result<FamilySpec, SessionError> {
        match self.lookup(ln, name)? {
            Decl::Family(f) => Ok(f.clone()),
            d => Err(SessionError::new(
                ln,
                format!("name {name} is a {}, expected a family", d.kind()),
            )),
        }
    }

    fn get_points(&self, ln: usize, name: &str) -> Result<Vec<Vec<Scalar>>, SessionError> {
        match self.lookup(ln, name)? {
            Decl::Points(p) => Ok(p.clone()),
            d => Err(SessionError::new(
                ln,
                format!("name {name} is a {}, expected a point list", d.kind()),
            )),
        }
    }

    fn poly_in(&self, ln: usize, ctx: &Ctx, text: &str) -> Result<Polynomial, SessionError> {
        parse_polynomial(ctx, text).map_err(|e| SessionError::new(ln, e.to_string()))
    }

    fn line(&mut self, ln: usize, text: &str) -> Result<(), SessionError> {
        let trimmed = text.trim();
        let (head, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (trimmed, ""),
        };
        match head {
            "ring" => self.ring_line(ln, rest),
            "quotient" => self.quotient_line(ln, rest),
            "dim" => self.dim_line(ln, rest),
            "option" => self.option_line(ln, rest),
            "assume" => {
                if rest.is_empty() {
                    return Err(SessionError::new(ln, "assume needs a hypothesis"));
                }
                self.assumptions.push(rest.to_string());
                Ok(())
            }
            "poly" => self.poly_line(ln, rest),
            "ideal" => self.ideal_line(ln, rest),
            "module" => self.module_line(ln, rest),
            "points" => self.points_line(ln, rest),
            "germ" => self.germ_line(ln, rest),
            "family" => self.family_line(ln, rest),
            "task" => self.task_line(ln, rest),
            other => Err(SessionError::new(ln, format!("unknown directive '{other}'"))),
        }
    }

    fn ring_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.is_empty() {
            return Err(SessionError::new(ln, "ring needs a name"));
        }
        let name = toks[0];
        let mut space: Option<Vec<String>> = None;
        let mut params: Vec<String> = Vec::new();
        let mut field = self.default_field;
        let mut local = true;
        let mut i = 1;
        while i < toks.len() {
            let key = toks[i];
            let val = toks.get(i + 1).ok_or_else(|| {
                SessionError::new(ln, format!("expected a value after '{key}'"))
            })?;
            match key {
                "space" => space = Some(val.split(',').map(|s| s.to_string()).collect()),
                "params" => params = val.split(',').map(|s| s.to_string()).collect(),
                "over" => {
                    let f = parse_field(val).map_err(|e| SessionError::new(ln, e))?;
                    if !self.field_fixed {
                        field = f;
                    }
                }
                "order" => match *val {
                    "local" => local = true,
                    "global" => local = false,
                    other => {
                        return Err(SessionError::new(
                            ln,
                            format!("unknown order '{other}'; expected local or global"),
                        ))
                    }
                },
                other => {
                    return Err(SessionError::new(ln, format!("unknown ring clause '{other}'")))
                }
            }
            i += 2;
        }
        let space = space.ok_or_else(|| SessionError::new(ln, "ring needs a space clause"))?;
        for v in space.iter().chain(&params) {
            if !ident_ok(v) {
                return Err(SessionError::new(ln, format!("invalid variable name '{v}'")));
            }
        }
        let mut seen: Vec<&String> = space.iter().chain(&params).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != space.len() + params.len() {
            return Err(SessionError::new(ln, "duplicate variable names"));
        }
        let space_refs: Vec<&str> = space.iter().map(|s| s.as_str()).collect();
        let param_refs: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
        let order = if local {
            crate::order::MonomialOrder::LocalDegrevlex
        } else {
            crate::order::MonomialOrder::GlobalDegrevlex
        };
        let ctx = RingContext::new(&space_refs, &param_refs, field, order);
        self.bind(ln, name, Decl::Ring)?;
        self.current = Some(ctx);
        self.current_name = Some(name.to_string());
        Ok(())
    }

    fn quotient_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let ctx = self.ring(ln)?;
        let gens = self.bracket_list(ln, &ctx, rest)?;
        if gens.is_empty() {
            return Err(SessionError::new(ln, "quotient needs at least one equation"));
        }
        let derived = ctx.with_quotient(&gens);
        self.current = Some(derived);
        Ok(())
    }

    fn dim_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let ctx = self.ring(ln)?;
        let d: usize = rest
            .trim()
            .parse()
            .map_err(|_| SessionError::new(ln, format!("invalid dimension '{rest}'")))?;
        let derived = ctx.with_dim(d);
        self.current = Some(derived);
        Ok(())
    }

    fn option_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        for tok in rest.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| {
                SessionError::new(ln, format!("option '{tok}' is not key=value"))
            })?;
            match key {
                "seed" => {
                    let v = val
                        .parse()
                        .map_err(|_| SessionError::new(ln, format!("invalid seed '{val}'")))?;
                    self.options.seed = Some(v);
                }
                "nmax" => {
                    let v: usize = val
                        .parse()
                        .map_err(|_| SessionError::new(ln, format!("invalid nmax '{val}'")))?;
                    if v < 2 {
                        return Err(SessionError::new(ln, "nmax must be at least 2"));
                    }
                    self.options.n_max = Some(v);
                }
                "output" => match val {
                    "json" => self.options.json = Some(true),
                    "text" => self.options.json = Some(false),
                    other => {
                        return Err(SessionError::new(
                            ln,
                            format!("unknown output mode '{other}'"),
                        ))
                    }
                },
                "max_colength" => {
                    let v = val.parse().map_err(|_| {
                        SessionError::new(ln, format!("invalid max_colength '{val}'"))
                    })?;
                    self.options.budget = Some(v);
                }
                "field" => {
                    let f = parse_field(val).map_err(|e| SessionError::new(ln, e))?;
                    if !self.field_fixed {
                        self.default_field = f;
                    }
                }
                other => return Err(SessionError::new(ln, format!("unknown option '{other}'"))),
            }
        }
        Ok(())
    }

    /// Parses `[e1, ..., ek]` into polynomials of `ctx`.
    fn bracket_list(
        &self,
        ln: usize,
        ctx: &Ctx,
        text: &str,
    ) -> Result<Vec<Polynomial>, SessionError> {
        let inner = strip_delims(text, '[', ']')
            .ok_or_else(|| SessionError::new(ln, "expected a [...] list"))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        split_top_level(inner, ',')
            .iter()
            .map(|e| self.poly_in(ln, ctx, e))
            .collect()
    }

    fn name_and_value<'a>(
        &self,
        ln: usize,
        rest: &'a str,
    ) -> Result<(&'a str, &'a str), SessionError> {
        let (name, value) = rest
            .split_once('=')
            .ok_or_else(|| SessionError::new(ln, "expected <name> = <value>"))?;
        Ok((name.trim(), value.trim()))
    }

    fn poly_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let ctx = self.ring(ln)?;
        let (name, value) = self.name_and_value(ln, rest)?;
        let p = self.poly_in(ln, &ctx, value)?;
        self.bind(ln, name, Decl::Poly(p))
    }

    fn ideal_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let ctx = self.ring(ln)?;
        let (name, value) = self.name_and_value(ln, rest)?;
        let gens = self.bracket_list(ln, &ctx, value)?;
        if gens.is_empty() {
            return Err(SessionError::new(ln, "ideal needs at least one generator"));
        }
        self.bind(ln, name, Decl::Module(Submodule::ideal(ctx, gens)))
    }

    fn module_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let ctx = self.ring(ln)?;
        let (name, value) = self.name_and_value(ln, rest)?;
        let inner = strip_delims(value, '[', ']')
            .ok_or_else(|| SessionError::new(ln, "expected [[...], ...]"))?;
        let mut gens = Vec::new();
        let mut rank = None;
        for row in split_top_level(inner, ',') {
            let comps = self.bracket_list(ln, &ctx, &row)?;
            if comps.is_empty() {
                return Err(SessionError::new(ln, "module rows must be nonempty"));
            }
            match rank {
                None => rank = Some(comps.len()),
                Some(r) if r != comps.len() => {
                    return Err(SessionError::new(ln, "module rows have unequal lengths"))
                }
                _ => {}
            }
            gens.push(FreeElement::new(comps));
        }
        let rank = rank.ok_or_else(|| SessionError::new(ln, "module needs at least one row"))?;
        self.bind(ln, name, Decl::Module(Submodule::new(ctx, rank, gens)))
    }

    fn points_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let ctx = self.ring(ln)?;
        let (name, value) = self.name_and_value(ln, rest)?;
        let mut pts = Vec::new();
        for tuple in split_top_level(value, ';') {
            let inner = strip_delims(&tuple, '(', ')')
                .ok_or_else(|| SessionError::new(ln, "expected (a,b,...) point tuples"))?;
            let coords: Result<Vec<Scalar>, SessionError> = inner
                .split(',')
                .map(|c| parse_scalar(ctx.field(), c).map_err(|e| SessionError::new(ln, e)))
                .collect();
            pts.push(coords?);
        }
        if pts.is_empty() {
            return Err(SessionError::new(ln, "points needs at least one tuple"));
        }
        self.bind(ln, name, Decl::Points(pts))
    }

    fn germ_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let target = self.ring(ln)?;
        let (name, value) = self.name_and_value(ln, rest)?;
        let (comps_text, from_text) = value
            .rsplit_once(" from ")
            .ok_or_else(|| SessionError::new(ln, "germ needs a 'from <vars>' clause"))?;
        let vars: Vec<String> =
            from_text.trim().split(',').map(|s| s.trim().to_string()).collect();
        for v in &vars {
            if !ident_ok(v) {
                return Err(SessionError::new(ln, format!("invalid variable name '{v}'")));
            }
        }
        if target.nparams() != 0 {
            return Err(SessionError::new(ln, "germ target ring must have no parameters"));
        }
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let source = RingContext::new(
            &var_refs,
            &[],
            target.field(),
            crate::order::MonomialOrder::LocalDegrevlex,
        );
        let inner = strip_delims(comps_text.trim(), '(', ')')
            .ok_or_else(|| SessionError::new(ln, "germ components must be parenthesized"))?;
        let comps: Result<Vec<Polynomial>, SessionError> = split_top_level(inner, ',')
            .iter()
            .map(|e| self.poly_in(ln, &source, e))
            .collect();
        let comps = comps?;
        if comps.len() != target.nspace() {
            return Err(SessionError::new(
                ln,
                format!(
                    "germ has {} components but the ring has {} variables",
                    comps.len(),
                    target.nspace()
                ),
            ));
        }
        self.bind(ln, name, Decl::Germ(MapGerm::new(source, target, comps)))
    }

    fn family_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.is_empty() {
            return Err(SessionError::new(ln, "family needs a name"));
        }
        let name = toks[0];
        let mut m = None;
        let mut n = None;
        let mut points = Vec::new();
        for tok in &toks[1..] {
            let (key, val) = tok.split_once('=').ok_or_else(|| {
                SessionError::new(ln, format!("family clause '{tok}' is not key=value"))
            })?;
            match key {
                "M" => m = Some(self.get_module(ln, val)?),
                "N" => n = Some(self.get_module(ln, val)?),
                "points" => points = self.get_points(ln, val)?,
                other => {
                    return Err(SessionError::new(ln, format!("unknown family clause '{other}'")))
                }
            }
        }
        let m = m.ok_or_else(|| SessionError::new(ln, "family needs an M=<module> clause"))?;
        let n = n.ok_or_else(|| SessionError::new(ln, "family needs an N=<module> clause"))?;
        if !m.ctx().compatible(n.ctx()) {
            return Err(SessionError::new(ln, "family modules come from different rings"));
        }
        if m.rank() != n.rank() {
            return Err(SessionError::new(ln, "family modules have different ambient ranks"));
        }
        let fam = FamilySpec::new(m, n).with_points(points);
        self.bind(ln, name, Decl::Family(fam))
    }

    fn task_line(&mut self, ln: usize, rest: &str) -> Result<(), SessionError> {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.is_empty() {
            return Err(SessionError::new(ln, "task needs an operation"));
        }
        let op = toks[0];
        let args = &toks[1..];
        let arity = |want: usize| -> Result<(), SessionError> {
            if args.len() != want {
                Err(SessionError::new(
                    ln,
                    format!("task {op} takes {want} arguments, got {}", args.len()),
                ))
            } else {
                Ok(())
            }
        };
        let op = match op {
            "multiplicity" => {
                arity(1)?;
                TaskOp::Multiplicity { name: args[0].into(), m: self.get_module(ln, args[0])? }
            }
            "colength" => {
                arity(1)?;
                TaskOp::Colength { name: args[0].into(), m: self.get_module(ln, args[0])? }
            }
            "quotient_length" | "pair" | "reduction_check" => {
                arity(2)?;
                let m = self.get_module(ln, args[0])?;
                let n = self.get_module(ln, args[1])?;
                if !m.ctx().compatible(n.ctx()) {
                    return Err(SessionError::new(ln, "modules come from different rings"));
                }
                if m.rank() != n.rank() {
                    return Err(SessionError::new(ln, "modules have different ambient ranks"));
                }
                let (mname, nname) = (args[0].into(), args[1].into());
                match op {
                    "quotient_length" => TaskOp::QuotientLength { mname, nname, m, n },
                    "pair" => TaskOp::Pair { mname, nname, m, n },
                    _ => TaskOp::ReductionCheck { mname, nname, m, n },
                }
            }
            "perturbation_count" => {
                arity(1)?;
                TaskOp::PerturbationCount {
                    name: args[0].into(),
                    m: self.get_module(ln, args[0])?,
                }
            }
            "perturbation_vs_br" => {
                arity(1)?;
                TaskOp::PerturbationVsBr {
                    name: args[0].into(),
                    m: self.get_module(ln, args[0])?,
                }
            }
            "j_invariant" => {
                arity(2)?;
                let f = self.get_poly(ln, args[0])?;
                let i = self.get_ideal(ln, args[1])?;
                if !f.ctx().compatible(i.ctx()) {
                    return Err(SessionError::new(ln, "objects come from different rings"));
                }
                TaskOp::JInvariant { fname: args[0].into(), iname: args[1].into(), f, i }
            }
            "polar_mult" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(SessionError::new(ln, "task polar_mult takes 1 or 2 arguments"));
                }
                let m = self.get_module(ln, args[0])?;
                let k = match args.get(1) {
                    Some(t) => t.parse().map_err(|_| {
                        SessionError::new(ln, format!("invalid codimension '{t}'"))
                    })?,
                    None => m.ctx().dim_d(),
                };
                if k == 0 {
                    return Err(SessionError::new(ln, "polar codimension must be at least 1"));
                }
                TaskOp::PolarMult { name: args[0].into(), m, k }
            }
            "multiplicity_polar_check" => {
                arity(1)?;
                TaskOp::PolarCheck { name: args[0].into(), family: self.get_family(ln, args[0])? }
            }
            "pellikaan" => {
                arity(5)?;
                let f = self.get_poly(ln, args[0])?;
                let i = self.get_ideal(ln, args[1])?;
                let family = self.get_poly(ln, args[2])?;
                let sigma = self.get_ideal(ln, args[3])?;
                let points = self.get_points(ln, args[4])?;
                if !f.ctx().compatible(i.ctx()) || !family.ctx().compatible(sigma.ctx()) {
                    return Err(SessionError::new(ln, "objects come from different rings"));
                }
                let fiber_dim = family.ctx().nspace();
                if points.iter().any(|p| p.len() != fiber_dim) {
                    return Err(SessionError::new(
                        ln,
                        format!("points must have {fiber_dim} coordinates"),
                    ));
                }
                TaskOp::Pellikaan {
                    fname: args[0].into(),
                    iname: args[1].into(),
                    f,
                    i,
                    family,
                    sigma,
                    points,
                }
            }
            "pushforward" => {
                arity(1)?;
                TaskOp::Pushforward { name: args[0].into(), germ: self.get_germ(ln, args[0])? }
            }
            "disentanglement" => {
                arity(1)?;
                TaskOp::Disentanglement {
                    name: args[0].into(),
                    germ: self.get_germ(ln, args[0])?,
                }
            }
            "milnor" => {
                arity(1)?;
                let i = self.get_ideal(ln, args[0])?;
                let eqs = i.gens().iter().map(|g| g.comp(0).clone()).collect();
                TaskOp::Milnor { name: args[0].into(), eqs }
            }
            "one_form_index" => {
                arity(3)?;
                let l = self.get_poly(ln, args[2])?;
                let eqs = self.equations_arg(ln, args[0], &l)?;
                let nv = l.ctx().nvars();
                let omega = if args[1] == "dl" {
                    FreeElement::new((0..nv).map(|i| l.derivative(i)).collect())
                } else {
                    let m = self.get_module(ln, args[1])?;
                    if m.rank() != nv || m.ngens() != 1 {
                        return Err(SessionError::new(
                            ln,
                            format!("{} must be a single row of {nv} coefficients", args[1]),
                        ));
                    }
                    m.gens()[0].clone()
                };
                TaskOp::OneFormIndex {
                    xname: args[0].into(),
                    omeganame: args[1].into(),
                    lname: args[2].into(),
                    eqs,
                    omega,
                    l,
                }
            }
            "wf" => {
                arity(4)?;
                let f = self.get_poly(ln, args[1])?;
                let l = self.get_poly(ln, args[2])?;
                if !f.ctx().compatible(l.ctx()) {
                    return Err(SessionError::new(ln, "objects come from different rings"));
                }
                let eqs = self.equations_arg(ln, args[0], &f)?;
                let y = parse_scalar(f.ctx().field(), args[3])
                    .map_err(|e| SessionError::new(ln, e))?;
                TaskOp::Wf {
                    xname: args[0].into(),
                    fname: args[1].into(),
                    lname: args[2].into(),
                    eqs,
                    f,
                    l,
                    y,
                }
            }
            other => return Err(SessionError::new(ln, format!("unknown task op '{other}'"))),
        };
        let id = self.tasks.len() + 1;
        self.tasks.push(Task { id, line: ln, op });
        Ok(())
    }

    /// Resolves an equation-list argument: `-` means no equations, otherwise
    /// the generators of a declared ideal in the same ring as `anchor`.
    fn equations_arg(
        &self,
        ln: usize,
        arg: &str,
        anchor: &Polynomial,
    ) -> Result<Vec<Polynomial>, SessionError> {
        if arg == "-" {
            return Ok(Vec::new());
        }
        let i = self.get_ideal(ln, arg)?;
        if !i.ctx().compatible(anchor.ctx()) {
            return Err(SessionError::new(ln, "objects come from different rings"));
        }
        Ok(i.gens().iter().map(|g| g.comp(0).clone()).collect())
    }
}

/// Strips one pair of outer delimiters; returns the inside.
fn strip_delims(s: &str, open: char, close: char) -> Option<&str> {
    let s = s.trim();
    let inner = s.strip_prefix(open)?.strip_suffix(close)?;
    Some(inner)
}

/// Parses a session file. `cli_field` overrides any field named inside the
/// session; errors carry the 1-based source line.
pub fn parse_session(text: &str, cli_field: Option<Field>) -> Result<Session, SessionError> {
    let mut parser = Parser::new(cli_field);
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != "format 1" {
                return Err(SessionError::new(ln, "expected a 'format 1' header line"));
            }
            saw_header = true;
            continue;
        }
        parser.line(ln, line)?;
    }
    if !saw_header {
        return Err(SessionError::new(1, "empty session; expected a 'format 1' header line"));
    }
    Ok(Session {
        options: parser.options,
        assumptions: parser.assumptions,
        tasks: parser.tasks,
    })
}
