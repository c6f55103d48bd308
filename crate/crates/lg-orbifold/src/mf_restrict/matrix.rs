use std::fmt;

use serde::{Deserialize, Serialize};

use super::MfError;
use crate::exact_algebra::{Polynomial, Rational};

/// Dense matrix of polynomials over one shared variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    vars: Vec<String>,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Polynomial>>,
}

impl PolyMatrix {
    pub fn zeros(vars: &[String], rows: usize, cols: usize) -> Self {
        PolyMatrix { vars: vars.to_vec(), rows, cols, data: vec![vec![Polynomial::zero(vars); cols]; rows] }
    }

    pub fn identity(vars: &[String], n: usize) -> Self {
        Self::scalar(vars, n, &Polynomial::one(vars))
    }

    /// p·Id.
    pub fn scalar(vars: &[String], n: usize, p: &Polynomial) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.data[i][i] = p.clone();
        }
        m
    }

    pub fn from_rows(vars: &[String], data: Vec<Vec<Polynomial>>) -> Result<Self, MfError> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if data.iter().any(|r| r.len() != cols) {
            return Err(MfError::ShapeMismatch("ragged matrix".into()));
        }
        if data.iter().flatten().any(|p| p.vars() != vars) {
            return Err(MfError::ShapeMismatch("entries over different variables".into()));
        }
        Ok(PolyMatrix { vars: vars.to_vec(), rows, cols, data })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.data[i][j] = p;
    }

    pub fn rows_vec(&self) -> &[Vec<Polynomial>] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Polynomial::is_zero)
    }

    fn same_shape(&self, o: &Self) -> Result<(), MfError> {
        if (self.rows, self.cols) != (o.rows, o.cols) || self.vars != o.vars {
            return Err(MfError::ShapeMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Result<Self, MfError> {
        self.same_shape(o)?;
        let data =
            self.data.iter().zip(&o.data).map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect()).collect();
        Ok(PolyMatrix { vars: self.vars.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, o: &Self) -> Result<Self, MfError> {
        self.zip(o, |a, b| a.add(b).expect("shared variables"))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, MfError> {
        self.zip(o, |a, b| a.sub(b).expect("shared variables"))
    }

    pub fn neg(&self) -> Self {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, q: &Polynomial) -> Result<Self, MfError> {
        if q.vars() != self.vars.as_slice() {
            return Err(MfError::ShapeMismatch("scalar over different variables".into()));
        }
        Ok(self.map(|p| p.mul(q).expect("shared variables")))
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&Polynomial) -> Result<Polynomial, MfError>) -> Result<Self, MfError> {
        let data =
            self.data.iter().map(|r| r.iter().map(&f).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix { vars: self.vars.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, MfError> {
        if self.cols != o.rows || self.vars != o.vars {
            return Err(MfError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(&self.vars, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    if o.data[k][j].is_zero() {
                        continue;
                    }
                    let t = a.mul(&o.data[k][j]).expect("shared variables");
                    out.data[i][j] = out.data[i][j].add(&t).expect("shared variables");
                }
            }
        }
        Ok(out)
    }

    /// [[tl, tr], [bl, br]].
    pub fn block(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Result<Self, MfError> {
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(MfError::ShapeMismatch("incompatible blocks".into()));
        }
        let mut data = Vec::with_capacity(tl.rows + bl.rows);
        for (a, b) in tl.data.iter().zip(&tr.data).chain(bl.data.iter().zip(&br.data)) {
            data.push(a.iter().chain(b).cloned().collect());
        }
        Self::from_rows(&tl.vars, data)
    }

    /// Rows r0..r1, columns c0..c1.
    pub fn sub_block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let data = self.data[r0..r1].iter().map(|r| r[c0..c1].to_vec()).collect();
        PolyMatrix { vars: self.vars.clone(), rows: r1 - r0, cols: c1 - c0, data }
    }

    /// Reorders rows and columns: out[i][j] = self[rows[i]][cols[j]].
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows.iter().map(|&i| cols.iter().map(|&j| self.data[i][j].clone()).collect()).collect();
        PolyMatrix { vars: self.vars.clone(), rows: rows.len(), cols: cols.len(), data }
    }

    pub fn with_vars(&self, vars: &[String]) -> Result<Self, MfError> {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|p| p.with_vars(vars)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix { vars: vars.to_vec(), rows: self.rows, cols: self.cols, data })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.data.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_strings() {
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    /// Entries are parsed over the union of their own variables.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let flat: Vec<&str> = rows.iter().flatten().map(String::as_str).collect();
        let polys = Polynomial::parse_common(&flat).map_err(serde::de::Error::custom)?;
        let vars = polys.first().map(|p| p.vars().to_vec()).unwrap_or_default();
        let mut it = polys.into_iter();
        let data = rows.iter().map(|r| r.iter().map(|_| it.next().unwrap()).collect()).collect();
        PolyMatrix::from_rows(&vars, data).map_err(serde::de::Error::custom)
    }
}
