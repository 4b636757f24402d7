//! Order lists on the command line: `8`, `3,8,11` or `1..100`.
//!
//! A range is inclusive and keeps only orders with a middle term. Explicit
//! lists are taken as written, so an invalid member is reported later by
//! the command that uses it.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderList(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderListError(String);

impl fmt::Display for OrderListError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for OrderListError {}

fn number(s: &str) -> Result<u64, OrderListError> {
    s.trim()
        .parse()
        .map_err(|_| OrderListError(format!("{s:?} is not a nonnegative integer")))
}

pub fn parse_orders(s: &str) -> Result<OrderList, OrderListError> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (number(a)?, number(b)?);
        if a > b {
            return Err(OrderListError(format!("empty range {a}..{b}")));
        }
        let v: Vec<u64> = (a..=b).filter(|&n| n % 4 == 0 || n % 4 == 3).filter(|&n| n > 0).collect();
        if v.is_empty() {
            return Err(OrderListError(format!("range {a}..{b} holds no n ≡ 0, 3 (mod 4)")));
        }
        return Ok(OrderList(v));
    }
    let v = s.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    Ok(OrderList(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_orders("8").unwrap().0, vec![8]);
        assert_eq!(parse_orders("3,8,5").unwrap().0, vec![3, 8, 5]);
        assert_eq!(parse_orders("1..12").unwrap().0, vec![3, 4, 7, 8, 11, 12]);
        assert_eq!(parse_orders("0..4").unwrap().0, vec![3, 4]);
        assert!(parse_orders("5..6").is_err());
        assert!(parse_orders("9..3").is_err());
        assert!(parse_orders("3,x").is_err());
        assert!(parse_orders("").is_err());
    }
}
