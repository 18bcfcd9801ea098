use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer Laurent polynomial; exponents are doubled so half-integer powers
/// stay integral.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub vars: usize,
    pub terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        Self::monomial(vec![0; vars], 1)
    }

    pub fn monomial(exp: Vec<i64>, coeff: i64) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, coeff);
        p
    }

    /// `t_i - 2 + t_i^-1` in `vars` variables.
    pub fn theta(vars: usize, i: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut e = vec![0; vars];
        p.add_term(e.clone(), -2);
        e[i] = 2;
        p.add_term(e.clone(), 1);
        e[i] = -2;
        p.add_term(e, 1);
        p
    }

    pub fn add_term(&mut self, exp: Vec<i64>, coeff: i64) {
        debug_assert_eq!(exp.len(), self.vars);
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i64]) -> i64 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    /// Equal up to an overall sign.
    pub fn eq_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == -other.clone()
    }

    /// Invariant, up to sign, under `t_i -> t_i^-1` for all `i`.
    pub fn is_symmetric_up_to_sign(&self) -> bool {
        let inv = LaurentPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, &c)| (e.iter().map(|x| -x).collect(), c)).collect(),
        };
        self.eq_up_to_sign(&inv)
    }

    pub fn evaluate_at_one(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.vars.max(rhs.vars));
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let mut mono = Vec::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let pow = if x % 2 == 0 { format!("{}", x / 2) } else { format!("{}/2", x) };
                mono.push(if pow == "1" { format!("t{}", i + 1) } else { format!("t{}^{}", i + 1, pow) });
            }
            let body = match (mag, mono.is_empty()) {
                (m, true) => m.to_string(),
                (1, false) => mono.join("*"),
                (m, false) => format!("{}*{}", m, mono.join("*")),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let t = LaurentPoly::theta(1, 0);
        assert!(t.is_symmetric_up_to_sign());
        assert_eq!(t.evaluate_at_one(), 0);
        let sq = &t * &t;
        assert_eq!(sq.coeff(&[0]), 6);
        assert_eq!(sq.coeff(&[4]), 1);
        assert_eq!((sq.clone() - sq).is_zero(), true);
        assert_eq!(LaurentPoly::one(2).to_string(), "1");
        assert_eq!(t.to_string(), "t1 - 2 + t1^-1");
    }
}
