//! Built-in generator matrices with their expected lattice invariants.
//!
//! Each matrix is stored as printed (the compressed `A | B1+2B2` block for
//! `Z_4` codes in standard form, or the two first rows for the double
//! negacirculant code over `F_5`) and assembled on load. A SHA-256 digest of
//! the whitespace-normalized text guards against transcription drift.

use std::fmt;

use num_rational::BigRational;
use sha2::{Digest, Sha256};

use crate::binwe::WeightEnumerator;
use crate::error::{Error, Result};
use crate::zkcode::{assemble_double_negacirculant, assemble_standard_form, ModInt, ModMatrix, ZkCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionKind {
    Z4StandardForm,
    F5DoubleNegacirculant,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Z4StandardForm => "z4-standard-form",
            ConstructionKind::F5DoubleNegacirculant => "f5-double-negacirculant",
        })
    }
}

/// Invariants the assembled code and its lattice are expected to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub min_norm: u64,
    pub kissing: u64,
    /// Four times the minimum norm of the shadow.
    pub sigma: u64,
    pub euclidean_weight: Option<u64>,
    pub residue: Option<WeightEnumerator>,
}

impl Expected {
    pub fn shadow_min(&self) -> BigRational {
        BigRational::new(self.sigma.into(), 4u32.into())
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub kind: ConstructionKind,
    pub length: usize,
    pub raw: &'static str,
    pub digest: &'static str,
    pub expected: Expected,
}

const C36: &str = "
000010001011100111100010 130113
011001000101000011101001 231133
100010010111110001110111 000230
110011100011001100111111 032133
011110101100111001011001 321113
111111111111110000000000 222203
";

const D36: &str = "
0001101111001000100110 0131310
1101111000101001010010 1233122
0111100011110010100011 0121203
1110100110001110111011 3133300
0101001101100001101101 1203301
0000011111111111111110 0022113
1111111111111100000000 2220232
";

const C37: &str = "
0101001010110011110000011 003121
0111100111010100000110110 323200
1010001100010011111110101 313301
0000001110001100111101100 033031
1110011111111010100000000 000132
1001110010000111111111000 220010
";

const C41: &str = "
10111111111001000010001 101031013
11001100111111100111000 112233010
01101100001100110110100 001332012
11010101000111001010100 023102310
11111010110101011110111 033211301
10000101001101101010101 132003201
11100110011010001101111 210211330
01110001111111010000111 230321312
01101110010011001111011 232022022
";

const C43: &str = "
01010011110100111 0033202030013
01100001111010111 3212001202013
10100011110100010 1122313032032
00001111111011100 1100211211331
01101101000000110 3300133330012
00011011001111100 2213322021123
00111011110010110 1230201103220
00100000101001101 0121022213003
11000010110100011 1012310010101
01011101010110101 3321023022100
10001011010111000 3021302111320
00001000111100101 3231010323110
11111111111111000 0222002002232
";

const C44: &str = "
(1, 0, 0, 0, 0, 3, 3, 0, 1, 0, 3)
(0, 1, 1, 0, 2, 1, 0, 0, 0, 2, 3)
";

fn we(n: usize, terms: &[(usize, u128)]) -> Option<WeightEnumerator> {
    Some(WeightEnumerator::new(n, terms.iter().copied()).expect("static enumerator"))
}

/// Every built-in instance, in listing order.
pub fn instances() -> Vec<Instance> {
    use ConstructionKind::*;
    vec![
        Instance {
            name: "C36",
            kind: Z4StandardForm,
            length: 36,
            raw: C36,
            digest: "de3d9c1d7b5933f9502f5d382b9247e71732ddddd53b93b9958efb20ace7247b",
            expected: Expected {
                min_norm: 3,
                kissing: 960,
                sigma: 20,
                euclidean_weight: Some(12),
                residue: we(36, &[(0, 1), (16, 27), (20, 36)]),
            },
        },
        Instance {
            name: "D36",
            kind: Z4StandardForm,
            length: 36,
            raw: D36,
            digest: "3054c783f707caa7b49d1c497913e1afa818c59ab25b6e1df6ae44e5f481eeaa",
            expected: Expected {
                min_norm: 4,
                kissing: 42840,
                sigma: 16,
                euclidean_weight: None,
                residue: we(36, &[(0, 1), (16, 63), (20, 63), (36, 1)]),
            },
        },
        Instance {
            name: "C37",
            kind: Z4StandardForm,
            length: 37,
            raw: C37,
            digest: "1f9a5862a2be51ee9fb8b5c7617fa43531e8d97ace5ddb5cd3b3cc6f074e8266",
            expected: Expected {
                min_norm: 3,
                kissing: 1184,
                sigma: 21,
                euclidean_weight: None,
                residue: we(37, &[(0, 1), (12, 1), (16, 17), (20, 45)]),
            },
        },
        Instance {
            name: "C41",
            kind: Z4StandardForm,
            length: 41,
            raw: C41,
            digest: "d9cee9ba1f1c9ba0bb48acdb7f50e87f275456334e38cd27b7ec0616d49ab7ae",
            expected: Expected {
                min_norm: 4,
                kissing: 15170,
                sigma: 17,
                euclidean_weight: Some(16),
                residue: we(41, &[(0, 1), (12, 1), (16, 89), (20, 288), (24, 108), (28, 23), (32, 2)]),
            },
        },
        Instance {
            name: "C43",
            kind: Z4StandardForm,
            length: 43,
            raw: C43,
            digest: "3a48d4b8a7253eaef278d39b6a706bbfa61fb8057b5fe356e8015a2bdfc892c6",
            expected: Expected {
                min_norm: 4,
                kissing: 9030,
                sigma: 19,
                euclidean_weight: Some(16),
                residue: we(43, &[(0, 1), (12, 29), (16, 1067), (20, 3498), (24, 3010), (28, 569), (32, 18)]),
            },
        },
        Instance {
            name: "C44",
            kind: F5DoubleNegacirculant,
            length: 44,
            raw: C44,
            digest: "040a8ad3c0ade016836ffd960c34b4e6135e1d4131f92fca626eac4bfadefab6",
            expected: Expected { min_norm: 4, kissing: 6600, sigma: 20, euclidean_weight: None, residue: None },
        },
    ]
}

/// Rows of the raw listing with runs of whitespace collapsed.
pub fn normalized(raw: &str) -> String {
    raw.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn digest_of(raw: &str) -> String {
    hex::encode(Sha256::digest(normalized(raw).as_bytes()))
}

pub fn instance(name: &str) -> Result<Instance> {
    instances()
        .into_iter()
        .find(|i| i.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownInstance(name.to_string()))
}

impl Instance {
    pub fn digest_matches(&self) -> bool {
        digest_of(self.raw) == self.digest
    }

    /// Assembles the code from the stored listing.
    pub fn code(&self) -> Result<ZkCode> {
        if !self.digest_matches() {
            return Err(Error::Precondition(format!("{}: stored matrix fails its digest", self.name)));
        }
        let text = normalized(self.raw);
        match self.kind {
            ConstructionKind::Z4StandardForm => {
                let rows: Vec<Vec<i64>> = text
                    .lines()
                    .map(|l| l.chars().filter(|c| !c.is_whitespace()).map(|c| c.to_digit(10).unwrap() as i64).collect())
                    .collect();
                let k1 = rows.len();
                let ab = ModMatrix::new(4, &rows)?;
                assemble_standard_form(k1, self.length, &ab)
            }
            ConstructionKind::F5DoubleNegacirculant => {
                let rows: Vec<Vec<ModInt>> = text
                    .lines()
                    .map(|l| {
                        l.trim_matches(|c| c == '(' || c == ')')
                            .split(',')
                            .map(|x| ModInt::new(x.trim().parse::<i64>().unwrap(), 5))
                            .collect()
                    })
                    .collect();
                assemble_double_negacirculant(&rows[0], &rows[1])
            }
        }
    }
}

/// Assembled code and its expected invariants.
pub fn load(name: &str) -> Result<(ZkCode, Expected)> {
    let inst = instance(name)?;
    Ok((inst.code()?, inst.expected))
}
