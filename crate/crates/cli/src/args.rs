use std::fmt;
use std::str::FromStr;

use dickson_core::{FieldElem, FieldSpec};

/// `--field` value: either `p^e` or a prime power `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldArg {
    pub p: u64,
    pub e: u32,
}

impl fmt::Display for FieldArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.e)
        }
    }
}

fn smallest_factor(n: u64) -> u64 {
    (2..).take_while(|d| d * d <= n).find(|d| n % d == 0).unwrap_or(n)
}

impl FromStr for FieldArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (p, e) = match s.split_once('^') {
            Some((p, e)) => {
                let p: u64 = p.trim().parse().map_err(|_| format!("bad prime in {s:?}"))?;
                let e: u32 = e.trim().parse().map_err(|_| format!("bad exponent in {s:?}"))?;
                (p, e)
            }
            None => {
                let q: u64 = s.parse().map_err(|_| format!("bad field order {s:?}"))?;
                if q < 2 {
                    return Err(format!("{q} is not a prime power"));
                }
                let p = smallest_factor(q);
                let mut rest = q;
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                if rest != 1 {
                    return Err(format!("{q} is not a prime power"));
                }
                (p, e)
            }
        };
        // surface primality and size errors at parse time
        FieldSpec::new(p, e).map_err(|err| err.to_string())?;
        Ok(FieldArg { p, e })
    }
}

/// Comma-separated list of fields, e.g. `3,9,5^2`.
#[derive(Debug, Clone)]
pub struct FieldList(pub Vec<FieldArg>);

impl FromStr for FieldList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(FieldArg::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(FieldList)
    }
}

/// A bare integer is a prime-subfield constant; a comma-separated list is a
/// coefficient vector, low-to-high. Entries are reduced mod p.
pub fn parse_element(field: &FieldSpec, s: &str) -> Result<FieldElem, String> {
    let p = field.p() as i64;
    let coeffs = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map(|v| v.rem_euclid(p) as u64)
                .map_err(|_| format!("bad element literal {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    field.elem(&coeffs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_forms() {
        assert_eq!("7".parse::<FieldArg>().unwrap(), FieldArg { p: 7, e: 1 });
        assert_eq!("3^2".parse::<FieldArg>().unwrap(), FieldArg { p: 3, e: 2 });
        assert_eq!("9".parse::<FieldArg>().unwrap(), FieldArg { p: 3, e: 2 });
        assert_eq!("2".parse::<FieldArg>().unwrap(), FieldArg { p: 2, e: 1 });
        assert!("12".parse::<FieldArg>().is_err());
        assert!("9^1".parse::<FieldArg>().is_err());
        assert!("3^11".parse::<FieldArg>().is_err());
        assert!("x".parse::<FieldArg>().is_err());
        let list: FieldList = "3,9, 5^2".parse().unwrap();
        assert_eq!(list.0.len(), 3);
    }

    #[test]
    fn element_literals() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(parse_element(&f9, "4").unwrap(), f9.int_scalar(1));
        assert_eq!(parse_element(&f9, "1,2").unwrap(), f9.elem(&[1, 2]).unwrap());
        assert_eq!(parse_element(&f9, "-1").unwrap(), f9.int_scalar(2));
        assert!(parse_element(&f9, "1,2,0").is_err());
        assert!(parse_element(&f9, "t").is_err());
    }
}
