//! Text documents describing charts and ideals, and the inline ideal syntax.
//!
//! A document is a sequence of `key = value` lines. Values are integers,
//! strings or (nested) arrays written in JSON syntax; integers have arbitrary
//! precision. `#` starts a comment line. See `docs/format.md`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::chart::{GroupAction, ToroidalChart};
use crate::ideal::{KummerIdeal, MonomialIdeal, OrdinaryIdeal};
use crate::lattice::{CharacterMap, FiniteAbelianGroup, IntMatrix, LatticeVector};
use crate::monoid::FsMonoid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Schema { line: usize, msg: String },
    #[error("line {line}: dimension mismatch: {msg}")]
    DimensionMismatch { line: usize, msg: String },
    #[error("line {line}: monomial {monomial} is not in the chart monoid")]
    MonomialNotInMonoid { line: usize, monomial: String },
    #[error(transparent)]
    Domain(#[from] crate::Error),
}

impl FormatError {
    pub fn name(&self) -> &'static str {
        match self {
            FormatError::Schema { .. } => "SchemaError",
            FormatError::DimensionMismatch { .. } => "DimensionMismatch",
            FormatError::MonomialNotInMonoid { .. } => "MonomialNotInMonoid",
            FormatError::Domain(e) => e.name(),
        }
    }

    pub fn code(&self) -> i32 {
        match self {
            FormatError::Schema { .. } => 30,
            FormatError::DimensionMismatch { .. } => 31,
            FormatError::MonomialNotInMonoid { .. } => 32,
            FormatError::Domain(e) => e.code(),
        }
    }

    /// Whether this is a problem with the input document rather than a
    /// mathematical failure.
    pub fn is_schema(&self) -> bool {
        !matches!(self, FormatError::Domain(_))
    }
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

fn schema(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Schema { line, msg: msg.into() }
}

fn mismatch(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::DimensionMismatch { line, msg: msg.into() }
}

/// Raw `key = value` pairs with their line numbers (1-based).
struct Fields {
    map: BTreeMap<String, (usize, Value)>,
    last_line: usize,
}

impl Fields {
    fn parse(text: &str) -> FormatResult<Fields> {
        let mut map = BTreeMap::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            last_line = line;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (k, v) = s.split_once('=').ok_or_else(|| schema(line, "expected `key = value`"))?;
            let key = k.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(schema(line, format!("invalid key `{key}`")));
            }
            let value: Value =
                serde_json::from_str(v.trim()).map_err(|e| schema(line, format!("invalid value for `{key}`: {e}")))?;
            if map.insert(key.to_string(), (line, value)).is_some() {
                return Err(schema(line, format!("duplicate key `{key}`")));
            }
        }
        Ok(Fields { map, last_line })
    }

    fn take(&mut self, key: &str) -> Option<(usize, Value)> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> FormatResult<(usize, Value)> {
        self.take(key).ok_or_else(|| schema(self.last_line, format!("missing key `{key}`")))
    }

    fn finish(self) -> FormatResult<()> {
        match self.map.into_iter().next() {
            Some((k, (line, _))) => Err(schema(line, format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

fn as_int(line: usize, v: &Value) -> FormatResult<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| schema(line, format!("`{n}` is not an integer"))),
        _ => Err(schema(line, format!("expected an integer, found {v}"))),
    }
}

fn as_usize(line: usize, v: &Value) -> FormatResult<usize> {
    as_int(line, v)?.to_usize().ok_or_else(|| schema(line, "expected a nonnegative machine-size integer"))
}

fn as_u64(line: usize, v: &Value) -> FormatResult<u64> {
    as_int(line, v)?.to_u64().ok_or_else(|| schema(line, "expected a nonnegative machine-size integer"))
}

fn as_array(line: usize, v: &Value) -> FormatResult<&Vec<Value>> {
    v.as_array().ok_or_else(|| schema(line, format!("expected an array, found {v}")))
}

fn as_vector(line: usize, v: &Value) -> FormatResult<LatticeVector> {
    Ok(LatticeVector(as_array(line, v)?.iter().map(|x| as_int(line, x)).collect::<FormatResult<_>>()?))
}

fn as_vectors(line: usize, v: &Value) -> FormatResult<Vec<LatticeVector>> {
    as_array(line, v)?.iter().map(|x| as_vector(line, x)).collect()
}

fn as_u64_rows(line: usize, v: &Value) -> FormatResult<Vec<Vec<u64>>> {
    as_array(line, v)?
        .iter()
        .map(|row| as_array(line, row)?.iter().map(|x| as_u64(line, x)).collect())
        .collect()
}

fn as_names(line: usize, v: &Value) -> FormatResult<Vec<String>> {
    let names: Vec<String> = as_array(line, v)?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| schema(line, "names must be strings")))
        .collect::<FormatResult<_>>()?;
    for n in &names {
        if !is_name(n) {
            return Err(schema(line, format!("`{n}` is not a valid coordinate name")));
        }
    }
    Ok(names)
}

fn is_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn expect_kind(fields: &mut Fields, kind: &str) -> FormatResult<()> {
    let (line, v) = fields.require("kind")?;
    if v.as_str() != Some(kind) {
        return Err(schema(line, format!("expected kind \"{kind}\", found {v}")));
    }
    Ok(())
}

/// A chart description, before validation into a [`ToroidalChart`].
#[derive(Clone, Debug)]
pub struct ChartDocument {
    pub rank: usize,
    pub generators: Vec<LatticeVector>,
    pub unit_rank: usize,
    pub t_count: usize,
    pub group: Vec<u64>,
    pub monomial_characters: Vec<Vec<u64>>,
    pub unit_characters: Vec<Vec<u64>>,
    pub t_characters: Vec<Vec<u64>>,
    pub automorphisms: Option<Vec<Vec<LatticeVector>>>,
    pub monomial_names: Option<Vec<String>>,
    pub t_names: Option<Vec<String>>,
    /// Line of each key in the source text, for error messages.
    lines: BTreeMap<&'static str, usize>,
}

impl ChartDocument {
    pub fn parse(text: &str) -> FormatResult<ChartDocument> {
        let mut f = Fields::parse(text)?;
        expect_kind(&mut f, "chart")?;
        let mut lines = BTreeMap::new();
        let mut get = |f: &mut Fields, key: &'static str, required: bool| -> FormatResult<Option<(usize, Value)>> {
            let v = if required { Some(f.require(key)?) } else { f.take(key) };
            if let Some((l, _)) = &v {
                lines.insert(key, *l);
            }
            Ok(v)
        };
        let (l, v) = get(&mut f, "rank", true)?.unwrap();
        let rank = as_usize(l, &v)?;
        let (l, v) = get(&mut f, "generators", true)?.unwrap();
        let generators = as_vectors(l, &v)?;
        let unit_rank = match get(&mut f, "units", false)? {
            Some((l, v)) => as_usize(l, &v)?,
            None => 0,
        };
        let t_count = match get(&mut f, "t_count", false)? {
            Some((l, v)) => as_usize(l, &v)?,
            None => 0,
        };
        let group = match get(&mut f, "group", false)? {
            Some((l, v)) => as_array(l, &v)?.iter().map(|x| as_u64(l, x)).collect::<FormatResult<Vec<_>>>()?,
            None => vec![],
        };
        let mut chars = |f: &mut Fields, key: &'static str, count: usize| -> FormatResult<Vec<Vec<u64>>> {
            match get(f, key, false)? {
                Some((l, v)) => as_u64_rows(l, &v),
                None => Ok(vec![vec![0; group.len()]; count]),
            }
        };
        let monomial_characters = chars(&mut f, "monomial_characters", rank)?;
        let unit_characters = chars(&mut f, "unit_characters", unit_rank)?;
        let t_characters = chars(&mut f, "t_characters", t_count)?;
        let automorphisms = match get(&mut f, "automorphisms", false)? {
            Some((l, v)) => Some(as_array(l, &v)?.iter().map(|m| as_vectors(l, m)).collect::<FormatResult<Vec<_>>>()?),
            None => None,
        };
        let monomial_names = match get(&mut f, "monomial_names", false)? {
            Some((l, v)) => Some(as_names(l, &v)?),
            None => None,
        };
        let t_names = match get(&mut f, "t_names", false)? {
            Some((l, v)) => Some(as_names(l, &v)?),
            None => None,
        };
        f.finish()?;
        let doc = ChartDocument {
            rank,
            generators,
            unit_rank,
            t_count,
            group,
            monomial_characters,
            unit_characters,
            t_characters,
            automorphisms,
            monomial_names,
            t_names,
            lines,
        };
        doc.check_dimensions()?;
        Ok(doc)
    }

    fn line(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(0)
    }

    fn check_dimensions(&self) -> FormatResult<()> {
        for g in &self.generators {
            if g.rank() != self.rank {
                return Err(mismatch(self.line("generators"), format!("generator {g} has length {} but rank is {}", g.rank(), self.rank)));
            }
        }
        if let Some(&q) = self.group.iter().find(|&&q| q == 0) {
            return Err(schema(self.line("group"), format!("group orders must be positive, found {q}")));
        }
        let k = self.group.len();
        for (key, rows, count) in [
            ("monomial_characters", &self.monomial_characters, self.rank),
            ("unit_characters", &self.unit_characters, self.unit_rank),
            ("t_characters", &self.t_characters, self.t_count),
        ] {
            if rows.len() != count {
                return Err(mismatch(self.line(key), format!("{key} has {} rows, expected {count}", rows.len())));
            }
            for r in rows {
                if r.len() != k {
                    return Err(mismatch(self.line(key), format!("{key} row has {} entries, expected {k}", r.len())));
                }
                if let Some((x, q)) = r.iter().zip(&self.group).find(|(x, q)| x >= q) {
                    return Err(schema(self.line(key), format!("character value {x} is not reduced modulo {q}")));
                }
            }
        }
        if let Some(autos) = &self.automorphisms {
            if autos.len() != k {
                return Err(mismatch(self.line("automorphisms"), format!("{} automorphisms for {k} cyclic factors", autos.len())));
            }
            for a in autos {
                if a.len() != self.rank || a.iter().any(|r| r.rank() != self.rank) {
                    return Err(mismatch(self.line("automorphisms"), format!("automorphisms must be {0}x{0}", self.rank)));
                }
            }
        }
        if let Some(n) = &self.monomial_names {
            if n.len() != self.rank {
                return Err(mismatch(self.line("monomial_names"), format!("{} names for rank {}", n.len(), self.rank)));
            }
        }
        if let Some(n) = &self.t_names {
            if n.len() != self.t_count {
                return Err(mismatch(self.line("t_names"), format!("{} names for {} coordinates", n.len(), self.t_count)));
            }
        }
        let mut all = self.names().0;
        all.extend(self.names().1);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != all.len() {
            return Err(schema(self.line("t_names").max(self.line("monomial_names")), "coordinate names must be distinct"));
        }
        Ok(())
    }

    /// Monomial and `t` coordinate names, defaulting to `x1..` and `t1..`.
    pub fn names(&self) -> (Vec<String>, Vec<String>) {
        let m = self.monomial_names.clone().unwrap_or_else(|| default_names("x", self.rank));
        let t = self.t_names.clone().unwrap_or_else(|| default_names("t", self.t_count));
        (m, t)
    }

    pub fn to_chart(&self) -> FormatResult<ToroidalChart> {
        self.check_dimensions()?;
        let monoid = if self.generators.is_empty() {
            FsMonoid::zero(self.rank)
        } else {
            FsMonoid::new(&self.generators, self.rank).map_err(|e| match e {
                crate::Error::NonPointedCone => {
                    schema(self.line("generators"), "monoid generators must span a pointed cone; use `units` for invertible coordinates")
                }
                other => other.into(),
            })?
        };
        let group = FiniteAbelianGroup::new(self.group.clone());
        let mut images = self.monomial_characters.clone();
        images.extend(self.unit_characters.iter().cloned());
        images.extend(self.t_characters.iter().cloned());
        let autos = self
            .automorphisms
            .iter()
            .flatten()
            .map(|rows| IntMatrix::from_rows(rows, self.rank))
            .collect();
        let action = GroupAction { group: group.clone(), chars: CharacterMap { group, images }, lattice_autos: autos };
        Ok(ToroidalChart::new(monoid, self.unit_rank, self.t_count, action)?)
    }

    pub fn from_chart(chart: &ToroidalChart) -> ChartDocument {
        let n = chart.monomial_rank();
        let imgs = &chart.action.chars.images;
        ChartDocument {
            rank: n,
            generators: chart.monoid.generators().to_vec(),
            unit_rank: chart.unit_rank,
            t_count: chart.t_count,
            group: chart.group().orders.clone(),
            monomial_characters: imgs[..n].to_vec(),
            unit_characters: imgs[n..n + chart.unit_rank].to_vec(),
            t_characters: imgs[n + chart.unit_rank..].to_vec(),
            automorphisms: if chart.action.has_autos() {
                Some(chart.action.lattice_autos.iter().map(|a| a.row_vectors()).collect())
            } else {
                None
            },
            monomial_names: None,
            t_names: None,
            lines: BTreeMap::new(),
        }
    }

    pub fn with_names(mut self, monomial: Option<Vec<String>>, t: Option<Vec<String>>) -> Self {
        self.monomial_names = monomial;
        self.t_names = t;
        self
    }

    pub fn print(&self) -> String {
        let mut s = String::from("kind = \"chart\"\n");
        let _ = writeln!(s, "rank = {}", self.rank);
        let _ = writeln!(s, "generators = {}", vectors_json(&self.generators));
        let _ = writeln!(s, "units = {}", self.unit_rank);
        let _ = writeln!(s, "t_count = {}", self.t_count);
        let _ = writeln!(s, "group = {}", u64_list(&self.group));
        let _ = writeln!(s, "monomial_characters = {}", u64_rows(&self.monomial_characters));
        let _ = writeln!(s, "unit_characters = {}", u64_rows(&self.unit_characters));
        let _ = writeln!(s, "t_characters = {}", u64_rows(&self.t_characters));
        if let Some(a) = &self.automorphisms {
            let parts: Vec<_> = a.iter().map(|m| vectors_json(m)).collect();
            let _ = writeln!(s, "automorphisms = [{}]", parts.join(", "));
        }
        if let Some(n) = &self.monomial_names {
            let _ = writeln!(s, "monomial_names = {}", names_json(n));
        }
        if let Some(n) = &self.t_names {
            let _ = writeln!(s, "t_names = {}", names_json(n));
        }
        s
    }
}

// source line numbers do not take part in equality
impl PartialEq for ChartDocument {
    fn eq(&self, o: &Self) -> bool {
        (self.rank, &self.generators, self.unit_rank, self.t_count, &self.group) == (o.rank, &o.generators, o.unit_rank, o.t_count, &o.group)
            && (&self.monomial_characters, &self.unit_characters, &self.t_characters)
                == (&o.monomial_characters, &o.unit_characters, &o.t_characters)
            && (&self.automorphisms, &self.monomial_names, &self.t_names) == (&o.automorphisms, &o.monomial_names, &o.t_names)
    }
}

impl Eq for ChartDocument {}

fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

pub(crate) fn vector_json(v: &LatticeVector) -> String {
    let parts: Vec<_> = v.0.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub(crate) fn vectors_json(vs: &[LatticeVector]) -> String {
    let parts: Vec<_> = vs.iter().map(vector_json).collect();
    format!("[{}]", parts.join(", "))
}

fn u64_list(v: &[u64]) -> String {
    let parts: Vec<_> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn u64_rows(rows: &[Vec<u64>]) -> String {
    let parts: Vec<_> = rows.iter().map(|r| u64_list(r)).collect();
    format!("[{}]", parts.join(", "))
}

fn names_json(n: &[String]) -> String {
    serde_json::to_string(n).expect("strings serialize")
}

/// A Kummer ideal description `(t_1..t_l, m_1^{1/d}..m_r^{1/d})`.
#[derive(Clone, Debug)]
pub struct IdealDocument {
    pub smooth_count: usize,
    pub denom: u64,
    pub monomials: Vec<LatticeVector>,
    monomials_line: usize,
}

impl IdealDocument {
    pub fn new(smooth_count: usize, denom: u64, monomials: Vec<LatticeVector>) -> Self {
        IdealDocument { smooth_count, denom, monomials, monomials_line: 0 }
    }

    pub fn parse(text: &str) -> FormatResult<IdealDocument> {
        let mut f = Fields::parse(text)?;
        expect_kind(&mut f, "ideal")?;
        let smooth_count = match f.take("smooth_count") {
            Some((l, v)) => as_usize(l, &v)?,
            None => 0,
        };
        let denom = match f.take("denom") {
            Some((l, v)) => as_u64(l, &v)?,
            None => 1,
        };
        let (line, v) = f.require("monomials")?;
        let monomials = as_vectors(line, &v)?;
        f.finish()?;
        if denom == 0 {
            return Err(schema(line, "denom must be positive"));
        }
        Ok(IdealDocument { smooth_count, denom, monomials, monomials_line: line })
    }

    pub fn print(&self) -> String {
        format!(
            "kind = \"ideal\"\nsmooth_count = {}\ndenom = {}\nmonomials = {}\n",
            self.smooth_count,
            self.denom,
            vectors_json(&self.monomials)
        )
    }

    /// Validates against a chart and builds the Kummer ideal.
    pub fn to_kummer(&self, chart: &ToroidalChart) -> FormatResult<KummerIdeal> {
        let line = self.monomials_line;
        if self.smooth_count > chart.t_count {
            return Err(mismatch(line, format!("{} regular parameters but the chart has {}", self.smooth_count, chart.t_count)));
        }
        for m in &self.monomials {
            if m.rank() != chart.monomial_rank() {
                return Err(mismatch(line, format!("monomial {m} has length {}, expected {}", m.rank(), chart.monomial_rank())));
            }
            if !chart.monoid.contains(m) {
                return Err(FormatError::MonomialNotInMonoid { line, monomial: m.to_string() });
            }
        }
        Ok(KummerIdeal::new(self.smooth_count, self.denom, self.monomials.clone())?)
    }

    pub fn to_monomial(&self, chart: &ToroidalChart) -> FormatResult<MonomialIdeal> {
        if self.smooth_count != 0 || self.denom != 1 {
            return Err(schema(self.monomials_line, "expected an ordinary monomial ideal"));
        }
        self.to_kummer(chart)?;
        Ok(MonomialIdeal::new(&chart.monoid, &self.monomials)?)
    }

    pub fn from_kummer(i: &KummerIdeal) -> Self {
        IdealDocument::new(i.smooth_count, i.denom, i.monomials.clone())
    }
}

impl PartialEq for IdealDocument {
    fn eq(&self, o: &Self) -> bool {
        (self.smooth_count, self.denom, &self.monomials) == (o.smooth_count, o.denom, &o.monomials)
    }
}

impl Eq for IdealDocument {}

/// Parses the inline ideal syntax against a chart document's names.
///
/// ```text
/// ideal   := [tpart ';'] mpart
/// tpart   := tname (',' tname)*
/// mpart   := [term (',' term)*]
/// term    := base ['^(1/' d ')']
/// base    := '(' int (',' int)* ')' | factor ('*' factor)*
/// factor  := name ['^' int | '^(' int ')']
/// ```
///
/// Terms with different roots are brought to a common denominator.
/// Regular parameters must be `t_1..t_l` in order.
pub fn parse_inline_ideal(text: &str, doc: &ChartDocument) -> FormatResult<IdealDocument> {
    let err = |msg: String| schema(0, format!("ideal `{text}`: {msg}"));
    let (mnames, tnames) = doc.names();
    let (tpart, mpart) = match text.split_once(';') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => ("", text.trim()),
    };
    let mut smooth = 0;
    if !tpart.is_empty() {
        for (i, name) in tpart.split(',').map(str::trim).enumerate() {
            match tnames.iter().position(|t| t == name) {
                Some(j) if j == i => smooth += 1,
                Some(_) => return Err(err("regular parameters must be the first coordinates, in order".into())),
                None => return Err(err(format!("unknown regular parameter `{name}`"))),
            }
        }
    }
    let mut terms: Vec<(LatticeVector, u64)> = Vec::new();
    for raw in split_top_level(mpart).map_err(err)? {
        terms.push(parse_term(raw.trim(), &mnames, doc.rank).map_err(err)?);
    }
    let d = terms.iter().fold(1u64, |acc, (_, d)| acc.lcm(d));
    let monomials = terms.into_iter().map(|(v, k)| v.scale(&BigInt::from(d / k))).collect();
    Ok(IdealDocument::new(smooth, d, monomials))
}

fn split_top_level(s: &str) -> Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced parentheses".into());
                }
            }
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    if !s[start..].trim().is_empty() || !out.is_empty() {
        out.push(&s[start..]);
    }
    Ok(out)
}

fn parse_term(s: &str, names: &[String], rank: usize) -> Result<(LatticeVector, u64), String> {
    let (base, d) = match s.rfind("^(1/") {
        Some(pos) if s.ends_with(')') => {
            let d: u64 = s[pos + 4..s.len() - 1].trim().parse().map_err(|_| format!("bad root in `{s}`"))?;
            if d == 0 {
                return Err("root of order zero".into());
            }
            (s[..pos].trim(), d)
        }
        _ => (s, 1),
    };
    if base.is_empty() {
        return Err("empty monomial".into());
    }
    let v = if base.starts_with('(') {
        let inner = base.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(|| format!("bad vector `{base}`"))?;
        let entries = inner
            .split(',')
            .map(|x| BigInt::from_str(x.trim()).map_err(|_| format!("bad integer `{}`", x.trim())))
            .collect::<Result<Vec<_>, _>>()?;
        LatticeVector(entries)
    } else if base == "1" {
        LatticeVector::zero(rank)
    } else {
        let mut v = LatticeVector::zero(rank);
        for factor in base.split('*').map(str::trim) {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), BigInt::from_str(e.trim().trim_start_matches('(').trim_end_matches(')')).map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (factor, BigInt::one()),
            };
            let i = names.iter().position(|n| n == name).ok_or_else(|| format!("unknown monomial coordinate `{name}`"))?;
            v.0[i] += exp;
        }
        v
    };
    if v.rank() != rank {
        return Err(format!("monomial {v} has length {}, expected {rank}", v.rank()));
    }
    Ok((v, d))
}

/// Writes a monomial with coordinate names, e.g. `x1^2*x2`; `1` for zero.
pub fn monomial_with_names(v: &LatticeVector, names: &[String]) -> String {
    if v.is_zero() {
        return "1".into();
    }
    let parts: Vec<String> = v
        .0
        .iter()
        .zip(names)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, n)| if x.is_one() { n.clone() } else if x.is_negative() { format!("{n}^({x})") } else { format!("{n}^{x}") })
        .collect();
    parts.join("*")
}

/// Inline form of a Kummer ideal, e.g. `t; pi^(1/2)`; parses back with
/// [`parse_inline_ideal`].
pub fn inline_kummer(i: &KummerIdeal, doc: &ChartDocument) -> String {
    let (m, t) = doc.names();
    let tpart: Vec<_> = t.iter().take(i.smooth_count).cloned().collect();
    let mpart: Vec<String> = i
        .monomials
        .iter()
        .map(|v| {
            let base = monomial_with_names(v, &m);
            let base = if base.contains('*') || base.contains('^') { format!("({})", vector_inline(v)) } else { base };
            if i.denom == 1 { base } else { format!("{base}^(1/{})", i.denom) }
        })
        .collect();
    if tpart.is_empty() {
        mpart.join(", ")
    } else {
        format!("{}; {}", tpart.join(", "), mpart.join(", "))
    }
}

fn vector_inline(v: &LatticeVector) -> String {
    v.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// An ordinary ideal `(t_i^a.., m..)` with coordinate names.
pub fn ordinary_with_names(i: &OrdinaryIdeal, doc: &ChartDocument) -> String {
    let (m, t) = doc.names();
    let mut parts: Vec<String> =
        i.smooth.iter().map(|&(k, a)| if a == 1 { t[k].clone() } else { format!("{}^{a}", t[k]) }).collect();
    parts.extend(i.monomials.iter().map(|v| monomial_with_names(v, &m)));
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lv;

    const ROOT: &str = "kind = \"chart\"\n# x + y divisible by 3\nrank = 2\ngenerators = [[3, 0], [0, 3], [1, 2], [2, 1]]\n";

    #[test]
    fn parse_root_chart() {
        let doc = ChartDocument::parse(ROOT).unwrap();
        let c = doc.to_chart().unwrap();
        assert!(c.monoid.contains(&lv(&[1, 2])));
        assert!(!c.monoid.contains(&lv(&[1, 0])));
        assert_eq!(ChartDocument::parse(&doc.print()).unwrap(), doc);
    }

    #[test]
    fn zero_chart() {
        let doc = ChartDocument::parse("kind = \"chart\"\nrank = 0\ngenerators = []\n").unwrap();
        let c = doc.to_chart().unwrap();
        assert!(c.monoid.is_zero());
        assert_eq!(c.points().len(), 1);
    }

    #[test]
    fn dimension_errors() {
        let bad = "kind = \"chart\"\nrank = 1\ngenerators = [[1]]\nt_count = 2\ngroup = [2]\nmonomial_characters = [[1]]\nt_characters = [[1]]\n";
        assert_eq!(ChartDocument::parse(bad).unwrap_err(), mismatch(7, "t_characters has 1 rows, expected 2"));
        let bad = "kind = \"chart\"\nrank = 2\ngenerators = [[1]]\n";
        assert!(matches!(ChartDocument::parse(bad), Err(FormatError::DimensionMismatch { line: 3, .. })));
        let bad = "kind = \"chart\"\nrank = 1\ngenerators = [[1]]\ncolor = 3\n";
        assert!(matches!(ChartDocument::parse(bad), Err(FormatError::Schema { line: 4, .. })));
        let bad = "kind = \"chart\"\nrank = x\n";
        assert!(matches!(ChartDocument::parse(bad), Err(FormatError::Schema { line: 2, .. })));
    }

    #[test]
    fn big_integers() {
        let doc = ChartDocument::parse("kind = \"chart\"\nrank = 1\ngenerators = [[123456789012345678901234567890]]\n").unwrap();
        assert_eq!(doc.generators[0].0[0].to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn inline_ideals() {
        let doc = ChartDocument::parse(
            "kind = \"chart\"\nrank = 1\ngenerators = [[1]]\nt_count = 1\nmonomial_names = [\"pi\"]\nt_names = [\"t\"]\n",
        )
        .unwrap();
        let i = parse_inline_ideal("t;pi^(1/2)", &doc).unwrap();
        assert_eq!((i.smooth_count, i.denom, i.monomials.clone()), (1, 2, vec![lv(&[1])]));
        let i = parse_inline_ideal("t; pi^(1/2), pi^3", &doc).unwrap();
        assert_eq!(i.monomials, vec![lv(&[1]), lv(&[6])]);
        let i = parse_inline_ideal("(3)", &doc).unwrap();
        assert_eq!((i.smooth_count, i.denom), (0, 1));
        assert!(parse_inline_ideal("s;pi", &doc).is_err());
        let k = parse_inline_ideal("t; pi^(1/2), pi^3", &doc).unwrap().to_kummer(&doc.to_chart().unwrap()).unwrap();
        assert_eq!(inline_kummer(&k, &doc), "t; pi^(1/2), (6)^(1/2)");
        assert_eq!(parse_inline_ideal(&inline_kummer(&k, &doc), &doc).unwrap().to_kummer(&doc.to_chart().unwrap()).unwrap(), k);
        assert!(parse_inline_ideal("(1,2)", &doc).is_err());
        let chart = doc.to_chart().unwrap();
        let bad = parse_inline_ideal("pi^(-1)", &doc).unwrap();
        assert!(matches!(bad.to_kummer(&chart), Err(FormatError::MonomialNotInMonoid { .. })));
    }

    #[test]
    fn ideal_document_round_trip() {
        let i = IdealDocument::new(1, 3, vec![lv(&[1, 2]), lv(&[0, 5])]);
        let back = IdealDocument::parse(&i.print()).unwrap();
        assert_eq!((back.smooth_count, back.denom, back.monomials), (1, 3, i.monomials));
    }

    #[test]
    fn names_print() {
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(monomial_with_names(&lv(&[2, 1]), &names), "x^2*y");
        assert_eq!(monomial_with_names(&lv(&[-1, 0]), &names), "x^(-1)");
        assert_eq!(monomial_with_names(&lv(&[0, 0]), &names), "1");
    }
}
