use num_integer::lcm;
use serde::{Deserialize, Serialize};

use super::{validate_variables, QueryRecord, VariableSpec};
use crate::{Error, Rational, Result, WeightMatrix};

/// Pairwise consistency scores `C(i -> j) = m / repeats`, kept as exact
/// true-counts `m`. The two directions of a pair are independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyMatrix {
    variables: Vec<VariableSpec>,
    repeats: u32,
    counts: Vec<Option<u32>>,
}

impl ConsistencyMatrix {
    pub fn new(variables: Vec<VariableSpec>, repeats: u32) -> Result<Self> {
        validate_variables(&variables)?;
        if repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        let n = variables.len();
        Ok(Self {
            variables,
            repeats,
            counts: vec![None; n * n],
        })
    }

    /// Builds from rational scores; the repeat count is the least common
    /// denominator of the scores.
    pub fn from_scores(
        variables: Vec<VariableSpec>,
        scores: &[Vec<Option<Rational>>],
    ) -> Result<Self> {
        let n = variables.len();
        if scores.len() != n || scores.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(format!("scores must be {n}x{n}")));
        }
        let mut denom: i64 = 1;
        for (i, row) in scores.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                if let (true, Some(s)) = (i != j, s) {
                    if *s < Rational::from_integer(0) || *s > Rational::from_integer(1) {
                        return Err(Error::Validation(format!(
                            "score {s} for {} -> {} outside [0, 1]",
                            variables[i].name, variables[j].name
                        )));
                    }
                    denom = lcm(denom, *s.denom());
                }
            }
        }
        let repeats = u32::try_from(denom)
            .map_err(|_| Error::Validation("score denominators too large".into()))?;
        let mut m = Self::new(variables, repeats)?;
        for (i, row) in scores.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                if let (true, Some(s)) = (i != j, s) {
                    let count = (*s * Rational::from_integer(denom)).to_integer();
                    m.set_count(i, j, count as u32)?;
                }
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn repeats(&self) -> u32 {
        self.repeats
    }

    pub fn set_count(&mut self, i: usize, j: usize, trues: u32) -> Result<()> {
        if i == j {
            return Err(Error::Validation("diagonal cells are undefined".into()));
        }
        if trues > self.repeats {
            return Err(Error::Validation(format!(
                "{trues} true answers out of {} repeats",
                self.repeats
            )));
        }
        let n = self.len();
        self.counts[i * n + j] = Some(trues);
        Ok(())
    }

    pub fn count(&self, i: usize, j: usize) -> Option<u32> {
        (i != j).then(|| self.counts[i * self.len() + j]).flatten()
    }

    pub fn score(&self, i: usize, j: usize) -> Option<Rational> {
        self.count(i, j)
            .map(|m| Rational::new(m as i64, self.repeats as i64))
    }

    pub fn first_missing(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && self.counts[i * n + j].is_none())
    }

    fn require_complete(&self) -> Result<()> {
        match self.first_missing() {
            Some((i, j)) => Err(Error::IncompleteMatrix {
                from: self.variables[i].name.clone(),
                to: self.variables[j].name.clone(),
            }),
            None => Ok(()),
        }
    }

    /// True-counts as integer weights (scores scaled by `repeats`).
    pub fn counts(&self) -> Result<WeightMatrix<i64>> {
        self.require_complete()?;
        Ok(WeightMatrix::from_fn(self.len(), |i, j| {
            self.count(i, j).expect("complete") as i64
        }))
    }

    pub fn scores(&self) -> Result<WeightMatrix<Rational>> {
        self.require_complete()?;
        Ok(WeightMatrix::from_fn(self.len(), |i, j| {
            self.score(i, j).expect("complete")
        }))
    }

    pub fn to_json(&self) -> MatrixJson {
        let n = self.len();
        MatrixJson {
            variables: self.variables.clone(),
            repeats: self.repeats,
            scores: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                Some(-1)
                            } else {
                                self.count(i, j).map(i64::from)
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        let n = json.variables.len();
        if json.scores.len() != n || json.scores.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(format!("scores must be {n}x{n}")));
        }
        let mut m = Self::new(json.variables.clone(), json.repeats)?;
        for (i, row) in json.scores.iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                match (i == j, cell) {
                    (true, _) | (false, None) => {}
                    (false, Some(c)) if *c < 0 => {
                        return Err(Error::Validation(format!(
                            "negative count for {} -> {}",
                            json.variables[i].name, json.variables[j].name
                        )))
                    }
                    (false, Some(c)) => m.set_count(i, j, *c as u32)?,
                }
            }
        }
        Ok(m)
    }

    /// Header row of names, one labelled row per variable, empty diagonal.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once(String::new()).chain(self.names());
        w.write_record(header).expect("in-memory write");
        for (i, v) in self.variables.iter().enumerate() {
            let cells =
                (0..self.len()).map(|j| self.score(i, j).map(format_decimal).unwrap_or_default());
            w.write_record(std::iter::once(v.name.clone()).chain(cells))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// Parses the CSV layout written by [`ConsistencyMatrix::to_csv`]. Cells
    /// may be decimals or `p/q` fractions; descriptions are left empty.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::Validation(format!("malformed CSV: {e}"));
        let names: Vec<String> = reader
            .headers()
            .map_err(bad)?
            .iter()
            .skip(1)
            .map(String::from)
            .collect();
        let n = names.len();
        let mut scores = vec![vec![None; n]; n];
        let mut seen = vec![false; n];
        for row in reader.records() {
            let row = row.map_err(bad)?;
            let label = row.get(0).unwrap_or_default();
            let i = names
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Validation(format!(
                    "CSV row {label:?} appears twice"
                )));
            }
            for (j, cell) in row.iter().skip(1).enumerate() {
                if i != j && !cell.is_empty() {
                    scores[i][j] = Some(parse_rational(cell)?);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Validation(format!(
                "CSV has no row for {:?}",
                names[i]
            )));
        }
        let vars = names
            .into_iter()
            .map(|n| VariableSpec::new(n, ""))
            .collect();
        Self::from_scores(vars, &scores)
    }
}

/// File form of a matrix: true-counts with `-1` on the diagonal and
/// `null` for cells not yet scored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub variables: Vec<VariableSpec>,
    pub repeats: u32,
    pub scores: Vec<Vec<Option<i64>>>,
}

impl MatrixJson {
    pub fn to_pretty_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix serializes");
        s.push('\n');
        s
    }
}

/// Fraction of true answers among the counted records of one ordered pair.
pub fn score_pair(from: &str, to: &str, records: &[QueryRecord]) -> Result<Rational> {
    if records.is_empty() {
        return Err(Error::InsufficientData {
            from: from.into(),
            to: to.into(),
            reason: "no answers recorded".into(),
        });
    }
    let mut trues = 0i64;
    for r in records {
        match r.parsed {
            Some(true) => trues += 1,
            Some(false) => {}
            None => {
                return Err(Error::InsufficientData {
                    from: from.into(),
                    to: to.into(),
                    reason: format!("unparsed answer {:?} for verb {:?}", r.raw_response, r.verb),
                })
            }
        }
    }
    Ok(Rational::new(trues, records.len() as i64))
}

/// Decimal text when the fraction terminates in base ten, `p/q` otherwise.
pub fn format_decimal(r: Rational) -> String {
    let (mut num, den) = (*r.numer(), *r.denom());
    let mut d = den;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{num}/{den}");
    }
    let digits = twos.max(fives);
    let scale = 10i64.pow(digits);
    num *= scale / den;
    if digits == 0 {
        return num.to_string();
    }
    let sign = if num < 0 { "-" } else { "" };
    let num = num.abs();
    let int = num / scale;
    let frac = num % scale;
    format!("{sign}{int}.{frac:0width$}", width = digits as usize)
}

/// Parses `p/q`, integers and plain decimals exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Validation(format!("not a number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 15
    {
        return Err(bad());
    }
    let scale = 10i64.pow(frac.len() as u32);
    let int: i64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_v: i64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let value = Rational::new(int * scale + frac_v, scale);
    Ok(if neg { -value } else { value })
}
