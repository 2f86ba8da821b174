//! Line-oriented `key: value` problem files.

use std::collections::BTreeMap;
use std::sync::Arc;

use artin_approx::poly::parse_polynomial_at;
use artin_approx::series::parse_series;
use artin_approx::{Domain, Error, Polynomial, Result, Ring, SeriesVector, TruncatedSeries};

/// Keys a problem file may use. Repeated keys append to the list.
pub const KEYS: &[&str] = &[
    "field",
    "series_vars",
    "unknowns",
    "variables",
    "equations",
    "point",
    "precision",
    "target_order",
    "strategy",
    "seed",
    "enforce_gamma",
    "a_fn",
    "K1",
    "K2",
    "K3",
    "K_prime",
    "modulo",
    "compare",
    "member",
    "ideal",
    "by",
    "order",
    "series",
    "divisor",
    "distinguished",
    "rows",
    "cols",
    "m",
    "d",
    "n",
    "s",
    "k_base",
    "family",
    "index",
    "targets",
    "threads",
];

/// Environment variable naming the field used when a file has no `field`.
pub const FIELD_ENV: &str = "ARTIN_FIELD";

/// One value together with where it came from.
#[derive(Clone, Debug)]
pub struct Entry {
    pub value: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ProblemFile {
    entries: BTreeMap<String, Vec<Entry>>,
}

impl ProblemFile {
    pub fn parse(src: &str) -> Result<ProblemFile> {
        let mut entries: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once(':') else {
                return Err(Error::parse(line, 1, "expected `key: value`"));
            };
            let k = key.trim();
            if !KEYS.contains(&k) {
                let col = raw.find(k).unwrap_or(0) + 1;
                return Err(Error::parse(line, col, format!("unknown key `{k}`")));
            }
            let column = key.len() + 2 + (value.len() - value.trim_start().len());
            entries.entry(k.to_string()).or_default().push(Entry { value: value.trim().to_string(), line, column });
        }
        Ok(ProblemFile { entries })
    }

    /// Builds a file from an echoed `inputs` map.
    pub fn from_echo(echo: &BTreeMap<String, Vec<String>>) -> Result<ProblemFile> {
        let mut entries = BTreeMap::new();
        for (k, vs) in echo {
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::parse(1, 1, format!("unknown key `{k}`")));
            }
            let list = vs.iter().map(|v| Entry { value: v.clone(), line: 1, column: 1 }).collect();
            entries.insert(k.clone(), list);
        }
        Ok(ProblemFile { entries })
    }

    pub fn echo(&self) -> BTreeMap<String, Vec<String>> {
        self.entries.iter().map(|(k, v)| (k.clone(), v.iter().map(|e| e.value.clone()).collect())).collect()
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_string(), vec![Entry { value, line: 0, column: 0 }]);
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn entries(&self, key: &str) -> &[Entry] {
        self.entries.get(key).map_or(&[], Vec::as_slice)
    }

    /// The single value of `key`; repeated scalar keys are an error.
    pub fn scalar(&self, key: &str) -> Result<Option<&Entry>> {
        match self.entries(key) {
            [] => Ok(None),
            [e] => Ok(Some(e)),
            [_, e, ..] => Err(Error::parse(e.line, 1, format!("`{key}` given more than once"))),
        }
    }

    pub fn require(&self, key: &str) -> Result<&Entry> {
        self.scalar(key)?.ok_or_else(|| Error::parse(0, 0, format!("missing key `{key}`")))
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.scalar(key)? {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|_| Error::parse(e.line, e.column, format!("bad value `{}` for `{key}`", e.value))),
        }
    }

    /// Comma-separated items of every occurrence of `key`, with columns.
    pub fn items(&self, key: &str) -> Vec<(String, usize, usize)> {
        let mut out = Vec::new();
        for e in self.entries(key) {
            let mut col = e.column;
            for part in e.value.split(',') {
                let lead = part.len() - part.trim_start().len();
                if !part.trim().is_empty() {
                    out.push((part.trim().to_string(), e.line, col + lead));
                }
                col += part.len() + 1;
            }
        }
        out
    }

    pub fn names(&self, key: &str) -> Result<Vec<String>> {
        let mut out: Vec<String> = Vec::new();
        for (name, line, col) in self.items(key) {
            if !artin_approx::poly::is_identifier(&name) {
                return Err(Error::parse(line, col, format!("`{name}` is not an identifier")));
            }
            if out.contains(&name) {
                return Err(Error::parse(line, col, format!("`{name}` declared twice")));
            }
            out.push(name);
        }
        Ok(out)
    }

    pub fn domain(&self) -> Result<Domain> {
        match self.scalar("field")? {
            Some(e) => e.value.parse().map_err(|err: Error| {
                let m = match err {
                    Error::Config(m) => m,
                    err => err.to_string(),
                };
                Error::parse(e.line, e.column, m)
            }),
            None => match std::env::var(FIELD_ENV) {
                Ok(v) if !v.trim().is_empty() => {
                    v.parse().map_err(|err: Error| match err {
                        Error::Config(m) => Error::Config(format!("{FIELD_ENV}: {m}")),
                        e => e,
                    })
                }
                _ => Ok(Domain::Rational),
            },
        }
    }

    pub fn series_vars(&self) -> Result<Vec<String>> {
        let v = self.names("series_vars")?;
        if v.len() > 2 {
            let e = &self.entries("series_vars")[0];
            return Err(Error::parse(e.line, e.column, "at most two series variables"));
        }
        Ok(v)
    }

    pub fn unknowns(&self) -> Result<Vec<String>> {
        let u = self.names("unknowns")?;
        let s = self.series_vars()?;
        if let Some(x) = u.iter().find(|x| s.contains(x)) {
            return Err(Error::parse(self.entries("unknowns")[0].line, 1, format!("`{x}` is both a series variable and an unknown")));
        }
        Ok(u)
    }

    /// Ring of the series variables.
    pub fn series_ring(&self) -> Result<Arc<Ring>> {
        let s = self.series_vars()?;
        if s.is_empty() {
            return Err(Error::parse(0, 0, "missing key `series_vars`"));
        }
        Ring::new(&s, self.domain()?)
    }

    /// Ring of the equations: series variables followed by unknowns, or
    /// `variables` when given.
    pub fn equation_ring(&self) -> Result<Arc<Ring>> {
        let vars = if self.has("variables") {
            self.names("variables")?
        } else {
            let mut v = self.series_vars()?;
            v.extend(self.unknowns()?);
            v
        };
        if vars.is_empty() {
            return Err(Error::parse(0, 0, "no variables declared"));
        }
        Ring::new(&vars, self.domain()?)
    }

    pub fn polynomials(&self, ring: &Arc<Ring>, key: &str) -> Result<Vec<Polynomial>> {
        self.items(key)
            .iter()
            .map(|(s, l, c)| {
                parse_polynomial_at(ring, s, *l, *c).map_err(|e| match e {
                    Error::UnknownVariable(v) => Error::parse(*l, *c, format!("undeclared variable `{v}`")),
                    e => e,
                })
            })
            .collect()
    }

    pub fn equations(&self, ring: &Arc<Ring>) -> Result<Vec<Polynomial>> {
        let fs = self.polynomials(ring, "equations")?;
        if fs.is_empty() {
            return Err(Error::parse(0, 0, "missing key `equations`"));
        }
        Ok(fs)
    }

    pub fn series(&self, ring: &Arc<Ring>, src: &str, line: usize, column: usize) -> Result<TruncatedSeries> {
        parse_series(ring, src).map_err(|e| match e {
            Error::Parse { line: l, column: c, message } => {
                Error::Parse { line: line + l - 1, column: if l == 1 { column + c - 1 } else { c }, message }
            }
            e => e,
        })
    }

    /// The approximate solution, one literal per unknown.
    pub fn point(&self, ring: &Arc<Ring>) -> Result<SeriesVector> {
        let items = self.items("point");
        if items.is_empty() {
            return Err(Error::parse(0, 0, "missing key `point`"));
        }
        let n = self.unknowns()?.len();
        if items.len() != n {
            return Err(Error::parse(items[0].1, items[0].2, format!("{} point entries for {n} unknowns", items.len())));
        }
        let v = items.iter().map(|(s, l, c)| self.series(ring, s, *l, *c)).collect::<Result<Vec<_>>>()?;
        SeriesVector::new(v)
    }

    /// Family members: each `family` line expanded over the `index` range.
    pub fn family(&self, ring: &Arc<Ring>) -> Result<Vec<SeriesVector>> {
        let n = self.unknowns()?.len();
        let range = match self.scalar("index")? {
            None => None,
            Some(e) => Some(parse_range(e)?),
        };
        let mut out = Vec::new();
        for e in self.entries("family") {
            let values: Vec<(Option<&str>, i64)> = match &range {
                Some((name, lo, hi)) => (*lo..=*hi).map(|t| (Some(name.as_str()), t)).collect(),
                None => vec![(None, 0)],
            };
            for (name, t) in values {
                let text = substitute(&e.value, name, t).map_err(|m| Error::parse(e.line, e.column, m))?;
                let parts: Vec<&str> = text.split(',').collect();
                if parts.len() != n {
                    return Err(Error::parse(e.line, e.column, format!("{} family entries for {n} unknowns", parts.len())));
                }
                let v = parts.iter().map(|p| self.series(ring, p.trim(), e.line, e.column)).collect::<Result<Vec<_>>>()?;
                out.push(SeriesVector::new(v)?);
            }
        }
        if out.is_empty() {
            return Err(Error::parse(0, 0, "missing key `family`"));
        }
        Ok(out)
    }

    pub fn indices(&self, key: &str) -> Result<Option<Vec<usize>>> {
        if !self.has(key) {
            return Ok(None);
        }
        let mut out = Vec::new();
        for (s, l, c) in self.items(key) {
            let i: usize = s.parse().map_err(|_| Error::parse(l, c, format!("bad index `{s}`")))?;
            if i == 0 {
                return Err(Error::parse(l, c, "indices start at 1"));
            }
            out.push(i - 1);
        }
        Ok(Some(out))
    }

    pub fn numbers(&self, key: &str) -> Result<Vec<u32>> {
        self.items(key)
            .into_iter()
            .map(|(s, l, c)| s.parse().map_err(|_| Error::parse(l, c, format!("bad number `{s}`"))))
            .collect()
    }
}

/// `t = 4..10`, both ends included.
fn parse_range(e: &Entry) -> Result<(String, i64, i64)> {
    let bad = || Error::parse(e.line, e.column, "index must look like `t = lo..hi`");
    let (name, span) = e.value.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = span.split_once("..").ok_or_else(bad)?;
    let name = name.trim().to_string();
    if !artin_approx::poly::is_identifier(&name) {
        return Err(bad());
    }
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Error::parse(e.line, e.column, "empty index range"));
    }
    Ok((name, lo, hi))
}

/// Replaces every `{expr}` by its integer value, `expr` built from the
/// index name, integers, `+ - *` and parentheses.
pub fn substitute(src: &str, name: Option<&str>, t: i64) -> std::result::Result<String, String> {
    let mut out = String::new();
    let mut rest = src;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').ok_or("unclosed `{`")? + open;
        let expr = &rest[open + 1..close];
        let name = name.ok_or_else(|| format!("`{{{expr}}}` needs an `index` range"))?;
        let v = Expr { s: expr.as_bytes(), pos: 0, name, t }.eval()?;
        out.push_str(&v.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

struct Expr<'a> {
    s: &'a [u8],
    pos: usize,
    name: &'a str,
    t: i64,
}

impl Expr<'_> {
    fn eval(mut self) -> std::result::Result<i64, String> {
        let v = self.sum()?;
        self.skip();
        if self.pos != self.s.len() {
            return Err(format!("unexpected `{}` in index expression", self.s[self.pos] as char));
        }
        Ok(v)
    }

    fn skip(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn sum(&mut self) -> std::result::Result<i64, String> {
        let mut v = self.product()?;
        loop {
            self.skip();
            match self.s.get(self.pos) {
                Some(b'+') => {
                    self.pos += 1;
                    v = v.checked_add(self.product()?).ok_or("index overflow")?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    v = v.checked_sub(self.product()?).ok_or("index overflow")?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn product(&mut self) -> std::result::Result<i64, String> {
        let mut v = self.atom()?;
        loop {
            self.skip();
            if self.s.get(self.pos) == Some(&b'*') {
                self.pos += 1;
                v = v.checked_mul(self.atom()?).ok_or("index overflow")?;
            } else {
                return Ok(v);
            }
        }
    }

    fn atom(&mut self) -> std::result::Result<i64, String> {
        self.skip();
        let start = self.pos;
        match self.s.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.skip();
                if self.s.get(self.pos) != Some(&b')') {
                    return Err("missing `)` in index expression".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| "index overflow".into())
            }
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                while self.s.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    self.pos += 1;
                }
                let id = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if id == self.name {
                    Ok(self.t)
                } else {
                    Err(format!("unknown index `{id}`"))
                }
            }
            _ => Err("empty index expression".into()),
        }
    }
}
