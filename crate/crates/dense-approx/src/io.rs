//! Instance files and random fixtures.
//!
//! One JSON object per file. Partition: `{"type":"partition","values":[..]}`.
//! Knapsack: `{"type":"knapsack","capacity":W,"items":[{"p":"1.25","w":3},..]}`
//! where `p` is an exact decimal string (a plain integer is also accepted).

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{KnapsackInstance, KnapsackItem};
use crate::multiset::IntegerMultiset;
use crate::ratio::Ratio64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Partition(IntegerMultiset),
    Knapsack(KnapsackInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Partition(_) => "partition",
            Instance::Knapsack(_) => "knapsack",
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum Wire {
    Partition { values: Vec<u64> },
    Knapsack { capacity: u64, items: Vec<WireItem> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireItem {
    p: WireProfit,
    w: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireProfit {
    Int(u64),
    Text(String),
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Renders `num/den` as an exact decimal, or fails if the reduced
/// denominator has a prime factor other than 2 or 5.
fn decimal_string(num: u64, den: u64) -> Result<String> {
    let g = gcd(num.max(1), den);
    let (mut num, den) = (num / g, den / g);
    let mut s = format!("{}", num / den);
    num %= den;
    if num != 0 {
        s.push('.');
        let mut rem = num as u128;
        for _ in 0..40 {
            rem *= 10;
            s.push(char::from(b'0' + (rem / den as u128) as u8));
            rem %= den as u128;
            if rem == 0 {
                return Ok(s);
            }
        }
        return Err(Error::Parse(format!(
            "profit {num}/{den} has no finite decimal form"
        )));
    }
    Ok(s)
}

fn items_to_wire(inst: &KnapsackInstance) -> Result<Vec<WireItem>> {
    inst.items()
        .iter()
        .map(|it| {
            Ok(WireItem {
                p: WireProfit::Text(decimal_string(it.profit, inst.profit_den())?),
                w: it.weight,
            })
        })
        .collect()
}

fn items_from_wire(wire: Vec<WireItem>, capacity: u64) -> Result<KnapsackInstance> {
    let profits: Vec<Ratio64> = wire
        .iter()
        .map(|it| match &it.p {
            WireProfit::Int(v) => Ok(Ratio64::from_int(*v)),
            WireProfit::Text(s) => Ratio64::parse_decimal(s),
        })
        .collect::<Result<_>>()?;
    // common denominator: lcm of the reduced per-item denominators
    let mut den = 1u64;
    for p in &profits {
        den = (den / gcd(den, p.den()))
            .checked_mul(p.den())
            .ok_or_else(|| Error::Parse("profit denominators do not fit a common u64 grid".into()))?;
    }
    let items = profits
        .iter()
        .zip(&wire)
        .map(|(p, it)| {
            let num = p
                .num()
                .checked_mul(den / p.den())
                .ok_or_else(|| Error::Parse(format!("profit {p} overflows the common grid")))?;
            Ok(KnapsackItem { profit: num, weight: it.w })
        })
        .collect::<Result<_>>()?;
    KnapsackInstance::new(items, capacity, den)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let wire: Wire = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match wire {
        Wire::Partition { values } => Ok(Instance::Partition(IntegerMultiset::new(values)?)),
        Wire::Knapsack { capacity, items } => {
            Ok(Instance::Knapsack(items_from_wire(items, capacity)?))
        }
    }
}

pub fn format_instance(inst: &Instance) -> Result<String> {
    let wire = match inst {
        Instance::Partition(x) => Wire::Partition { values: x.values().to_vec() },
        Instance::Knapsack(k) => Wire::Knapsack {
            capacity: k.capacity(),
            items: items_to_wire(k)?,
        },
    };
    let mut s = serde_json::to_string_pretty(&wire).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn write_instance(inst: &Instance, path: &Path) -> Result<()> {
    std::fs::write(path, format_instance(inst)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Uniform values in [1, max_value], deterministic per seed.
pub fn gen_partition(n: u64, max_value: u64, seed: u64) -> Result<IntegerMultiset> {
    if max_value == 0 {
        return Err(Error::InvalidInput("max value must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    IntegerMultiset::new((0..n).map(|_| rng.random_range(1..=max_value)).collect())
}

/// Profits are uniform hundredths in [1, max_value], weights uniform
/// integers in [1, max_value], capacity half the total weight.
pub fn gen_knapsack(n: u64, max_value: u64, seed: u64) -> Result<KnapsackInstance> {
    if max_value == 0 {
        return Err(Error::InvalidInput("max value must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items: Vec<KnapsackItem> = (0..n)
        .map(|_| KnapsackItem {
            profit: rng.random_range(100..=100 * max_value),
            weight: rng.random_range(1..=max_value),
        })
        .collect();
    let total: u128 = items.iter().map(|it| it.weight as u128).sum();
    let capacity = (total / 2).max(1) as u64;
    KnapsackInstance::new(items, capacity, 100)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_round_trip() {
        let inst = Instance::Partition(IntegerMultiset::new(vec![3, 1, 4, 1, 5]).unwrap());
        let text = format_instance(&inst).unwrap();
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn knapsack_decimal_profits() {
        let text = r#"{"type":"knapsack","capacity":10,
            "items":[{"p":"1.25","w":3},{"p":2,"w":4},{"p":"0.4","w":1}]}"#;
        let Instance::Knapsack(k) = parse_instance(text).unwrap() else {
            panic!("wrong kind");
        };
        assert_eq!(k.profit_den(), 20);
        let nums: Vec<u64> = k.items().iter().map(|it| it.profit).collect();
        assert_eq!(nums, vec![25, 40, 8]);

        // emit-parse-emit is a fixed point
        let emitted = format_instance(&Instance::Knapsack(k)).unwrap();
        let again = parse_instance(&emitted).unwrap();
        assert_eq!(format_instance(&again).unwrap(), emitted);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_instance("{").is_err());
        assert!(parse_instance(r#"{"type":"partition","values":[0]}"#).is_err());
        assert!(parse_instance(r#"{"type":"knapsack","capacity":1,"items":[{"p":"1e3","w":1}]}"#).is_err());
        assert!(parse_instance(r#"{"type":"partition","values":[1],"extra":true}"#).is_err());
    }

    #[test]
    fn decimal_strings_are_exact() {
        assert_eq!(decimal_string(25, 20).unwrap(), "1.25");
        assert_eq!(decimal_string(40, 20).unwrap(), "2");
        assert_eq!(decimal_string(1, 64).unwrap(), "0.015625");
        assert!(decimal_string(1, 3).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_partition(12, 50, 7).unwrap(), gen_partition(12, 50, 7).unwrap());
        let k = gen_knapsack(12, 50, 7).unwrap();
        assert_eq!(k, gen_knapsack(12, 50, 7).unwrap());
        assert!(k.items().iter().all(|it| (100..=5000).contains(&it.profit)));
        assert!(k.items().iter().all(|it| (1..=50).contains(&it.weight)));
        assert!(gen_partition(0, 50, 7).unwrap().is_empty());
    }
}
