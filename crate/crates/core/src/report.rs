//! Line-oriented verification reports: one `KEY value` line per computed
//! invariant, stopping at the first claim that does not hold.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::binwe::WeightEnumerator;
use crate::error::{Error, Result};
use crate::lattice::{construction_a, ExactLattice};
use crate::registry::Expected;
use crate::svp::{min_euclidean_weight_via_lattice, min_norm, shadow_minimum, theta_head, EnumConfig};
use crate::zkcode::ZkCode;

/// Codes with at most this many residue words have their residue enumerator
/// computed.
pub const RESIDUE_BUDGET: u64 = 1 << 24;

/// Invariants a code is claimed to have; `None` means "not claimed".
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Claims {
    pub min_norm: Option<u64>,
    pub kissing: Option<u64>,
    pub sigma: Option<u64>,
    pub euclidean_weight: Option<u64>,
    pub residue: Option<WeightEnumerator>,
}

impl From<&Expected> for Claims {
    fn from(e: &Expected) -> Self {
        Claims {
            min_norm: Some(e.min_norm),
            kissing: Some(e.kissing),
            sigma: Some(e.sigma),
            euclidean_weight: e.euclidean_weight,
            residue: e.residue.clone(),
        }
    }
}

impl Claims {
    /// Reads `expect` pairs from a code file. Keys are `min_norm`, `kissing`,
    /// `sigma` and `euclidean_weight`.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let mut c = Claims::default();
        for (k, v) in pairs {
            let x: u64 =
                v.parse().map_err(|_| Error::Precondition(format!("expect {k}: `{v}` is not a count")))?;
            let slot = match k.as_str() {
                "min_norm" => &mut c.min_norm,
                "kissing" => &mut c.kissing,
                "sigma" => &mut c.sigma,
                "euclidean_weight" => &mut c.euclidean_weight,
                _ => return Err(Error::Precondition(format!("unknown expectation `{k}`"))),
            };
            *slot = Some(x);
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub key: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
    mismatch: Option<Mismatch>,
}

impl Report {
    pub fn lines(&self) -> &[(String, String)] {
        &self.lines
    }

    pub fn value(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn mismatch(&self) -> Option<&Mismatch> {
        self.mismatch.as_ref()
    }

    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }

    fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    /// Records the value and returns `false` if it contradicts the claim.
    fn check<T: fmt::Display + PartialEq>(&mut self, key: &str, actual: T, claim: Option<&T>) -> bool {
        self.push(key, &actual);
        match claim {
            Some(e) if *e != actual => {
                self.mismatch = Some(Mismatch { key: key.to_string(), expected: e.to_string(), actual: actual.to_string() });
                false
            }
            _ => true,
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k} {v}")?;
        }
        match &self.mismatch {
            None => writeln!(f, "RESULT PASS"),
            Some(m) => {
                writeln!(f, "RESULT FAIL")?;
                writeln!(f, "FIRST_MISMATCH {} expected {} got {}", m.key, m.expected, m.actual)
            }
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn fraction(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Minimum, kissing number, shadow minimum and `sigma` of a unimodular lattice.
fn lattice_lines(r: &mut Report, prefix: &str, l: &ExactLattice, claims: &Claims, cfg: &EnumConfig) -> Result<bool> {
    let key = |k: &str| format!("{prefix}{k}");
    if !r.check(&key("UNIMODULAR"), yes_no(l.is_unimodular()), Some(&"yes")) {
        return Ok(false);
    }
    let even = l.is_even();
    r.push(&key("EVEN"), yes_no(even));
    let (m, kiss) = min_norm(l, cfg)?;
    if !m.is_integer() {
        return Err(Error::Precondition("unimodular lattice with a non-integral norm".into()));
    }
    let m = m.to_integer();
    let m = u64::try_from(m).map_err(|_| Error::Overflow("minimum norm"))?;
    if !r.check(&key("MIN_NORM"), m, claims.min_norm.as_ref()) || !r.check(&key("KISSING"), kiss, claims.kissing.as_ref()) {
        return Ok(false);
    }
    if even {
        return Ok(true);
    }
    let (smin, scount) = shadow_minimum(l, cfg)?;
    r.push(&key("SHADOW_MIN"), fraction(&smin));
    r.push(&key("SHADOW_COUNT"), scount);
    let sigma = (smin * BigRational::from_integer(BigInt::from(4))).to_integer();
    let sigma = u64::try_from(sigma).map_err(|_| Error::Overflow("sigma"))?;
    Ok(r.check(&key("SIGMA"), sigma, claims.sigma.as_ref()))
}

/// Full check of a self-dual code and its Construction-A lattice.
pub fn verify_code(name: &str, code: &ZkCode, claims: &Claims, cfg: &EnumConfig) -> Result<Report> {
    let mut r = Report::default();
    r.push("NAME", name);
    r.push("MODULUS", code.modulus());
    r.push("LENGTH", code.length());
    r.push("SIZE", code.cardinality());
    if !r.check("SELF_DUAL", yes_no(code.is_self_dual()), Some(&"yes")) {
        return Ok(r);
    }
    if code.modulus() == 4 {
        let res = code.residue()?;
        let k1 = res.dimension().ok_or(Error::UnsupportedModulus(res.modulus()))?;
        r.push("RESIDUE_DIMENSION", k1);
        if k1 as u64 <= RESIDUE_BUDGET.ilog2() as u64 {
            let we = res.weight_enumerator(RESIDUE_BUDGET)?;
            if !r.check("RESIDUE_ENUMERATOR", we, claims.residue.as_ref()) {
                return Ok(r);
            }
        }
    }
    let l = construction_a(code)?;
    if !lattice_lines(&mut r, "", &l, claims, cfg)? {
        return Ok(r);
    }
    if code.modulus() == 4 && claims.euclidean_weight.is_some() {
        let de = min_euclidean_weight_via_lattice(code, cfg)?;
        let shown = de.map_or_else(|| "above16".to_string(), |d| d.to_string());
        let claim = claims.euclidean_weight.map(|d| d.to_string());
        r.check("EUCLIDEAN_WEIGHT", shown, claim.as_ref());
    }
    Ok(r)
}

/// Invariants of the two unimodular neighbors of the lattice of `code`.
pub fn neighbor_report(name: &str, code: &ZkCode, theta_to: usize, cfg: &EnumConfig) -> Result<Report> {
    let mut r = Report::default();
    r.push("NAME", name);
    let l = construction_a(code)?;
    let neighbors = l.unimodular_neighbors()?;
    for (i, nb) in neighbors.iter().enumerate() {
        let prefix = format!("NEIGHBOR{}_", i + 1);
        lattice_lines(&mut r, &prefix, nb, &Claims::default(), cfg)?;
        let th = theta_head(nb, theta_to, cfg)?;
        let head: Vec<String> = (0..=theta_to).map(|e| th.coeff(e).to_string()).collect();
        r.push(&format!("{prefix}THETA"), head.join(" "));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zkcode::parse_code;

    fn octacode() -> ZkCode {
        let text = "zkcode k=4 n=8
row 10003121
row 01001231
row 00103332
row 00012311
";
        parse_code(text).unwrap().code
    }

    #[test]
    fn octacode_passes_with_true_claims() {
        let claims = Claims { min_norm: Some(2), kissing: Some(240), ..Claims::default() };
        let r = verify_code("O8", &octacode(), &claims, &EnumConfig::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.value("EVEN"), Some("yes"));
        assert_eq!(r.value("KISSING"), Some("240"));
    }

    #[test]
    fn first_mismatch_is_named() {
        let claims = Claims { min_norm: Some(2), kissing: Some(241), sigma: Some(1), ..Claims::default() };
        let r = verify_code("O8", &octacode(), &claims, &EnumConfig::default()).unwrap();
        let m = r.mismatch().unwrap();
        assert_eq!((m.key.as_str(), m.expected.as_str(), m.actual.as_str()), ("KISSING", "241", "240"));
        assert!(r.to_string().ends_with("RESULT FAIL\nFIRST_MISMATCH KISSING expected 241 got 240\n"));
    }

    #[test]
    fn claims_from_pairs() {
        let pairs = vec![("kissing".to_string(), "960".to_string()), ("sigma".to_string(), "20".to_string())];
        let c = Claims::from_pairs(&pairs).unwrap();
        assert_eq!((c.kissing, c.sigma, c.min_norm), (Some(960), Some(20), None));
        assert!(Claims::from_pairs(&[("colour".into(), "1".into())]).is_err());
        assert!(Claims::from_pairs(&[("sigma".into(), "x".into())]).is_err());
    }
}
