//! Ground values and finite domains.

use std::fmt;

use serde::Serialize;

/// A ground value of the machine language.
///
/// Bags are stored as sorted vectors so structural equality is multiset
/// equality, and the derived ordering gives a deterministic state numbering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Seq(Vec<Value>),
    Bag(Vec<Value>),
}

impl Value {
    pub fn bag(mut items: Vec<Value>) -> Value {
        items.sort();
        Value::Bag(items)
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    /// Elements of a sequence or bag.
    pub fn elements(&self) -> Option<&[Value]> {
        match self {
            Value::Seq(v) | Value::Bag(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, items: &[Value]) -> fmt::Result {
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Seq(items) => {
                f.write_str("[")?;
                list(f, items)?;
                f.write_str("]")
            }
            Value::Bag(items) => {
                f.write_str("{|")?;
                list(f, items)?;
                f.write_str("|}")
            }
        }
    }
}

/// A finite carrier set with all bounds resolved.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    Bool,
    Int { lo: i64, hi: i64 },
    Seq { elem: Box<Domain>, max: usize },
    Bag { elem: Box<Domain>, max: usize },
}

impl Domain {
    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Domain::Bool, Value::Bool(_)) => true,
            (Domain::Int { lo, hi }, Value::Int(i)) => lo <= i && i <= hi,
            (Domain::Seq { elem, max }, Value::Seq(items))
            | (Domain::Bag { elem, max }, Value::Bag(items)) => {
                items.len() <= *max && items.iter().all(|x| elem.contains(x))
            }
            _ => false,
        }
    }

    /// Every value of the domain, in ascending order.
    pub fn values(&self) -> Vec<Value> {
        let mut out = match self {
            Domain::Bool => vec![Value::Bool(false), Value::Bool(true)],
            Domain::Int { lo, hi } => (*lo..=*hi).map(Value::Int).collect(),
            Domain::Seq { elem, max } => {
                let elems = elem.values();
                let mut out = vec![Value::Seq(Vec::new())];
                let mut layer: Vec<Vec<Value>> = vec![Vec::new()];
                for _ in 0..*max {
                    let mut next = Vec::with_capacity(layer.len() * elems.len());
                    for prefix in &layer {
                        for e in &elems {
                            let mut s = prefix.clone();
                            s.push(e.clone());
                            next.push(s);
                        }
                    }
                    out.extend(next.iter().cloned().map(Value::Seq));
                    layer = next;
                }
                out
            }
            Domain::Bag { elem, max } => {
                // non-decreasing sequences are exactly the canonical bags
                let elems = elem.values();
                let mut out = vec![Value::Bag(Vec::new())];
                let mut layer: Vec<(usize, Vec<Value>)> = vec![(0, Vec::new())];
                for _ in 0..*max {
                    let mut next = Vec::new();
                    for (start, prefix) in &layer {
                        for (i, e) in elems.iter().enumerate().skip(*start) {
                            let mut s = prefix.clone();
                            s.push(e.clone());
                            next.push((i, s));
                        }
                    }
                    out.extend(next.iter().map(|(_, s)| Value::Bag(s.clone())));
                    layer = next;
                }
                out
            }
        };
        out.sort();
        out
    }

    pub fn cardinality(&self) -> usize {
        self.values().len()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Bool => f.write_str("bool"),
            Domain::Int { lo, hi } => write!(f, "int {lo}..{hi}"),
            Domain::Seq { elem, max } => write!(f, "seq {elem} max {max}"),
            Domain::Bag { elem, max } => write!(f, "bag {elem} max {max}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(lo: i64, hi: i64) -> Box<Domain> {
        Box::new(Domain::Int { lo, hi })
    }

    #[test]
    fn bounded_sequence_count() {
        let d = Domain::Seq { elem: int(0, 2), max: 3 };
        assert_eq!(d.cardinality(), 40);
    }

    #[test]
    fn bounded_bag_count() {
        let d = Domain::Bag { elem: int(0, 2), max: 3 };
        assert_eq!(d.cardinality(), 20);
        assert!(d.values().iter().all(|v| d.contains(v)));
    }

    #[test]
    fn bag_equality_is_order_insensitive() {
        let a = Value::bag(vec![Value::Int(2), Value::Int(1)]);
        let b = Value::bag(vec![Value::Int(1), Value::Int(2)]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "{|1, 2|}");
    }

    #[test]
    fn contains_rejects_oversized() {
        let d = Domain::Seq { elem: int(0, 1), max: 1 };
        assert!(!d.contains(&Value::Seq(vec![Value::Int(0), Value::Int(0)])));
        assert!(!d.contains(&Value::Seq(vec![Value::Int(5)])));
    }
}
