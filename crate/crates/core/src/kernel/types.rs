use std::fmt;
use std::sync::Arc;

/// Simple types over the single base type `ι`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SimpleType {
    Base,
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    pub fn arrow(from: SimpleType, to: SimpleType) -> SimpleType {
        SimpleType::Arrow(Arc::new(from), Arc::new(to))
    }

    /// `ι → … → ι → ι` with `n` arguments.
    pub fn first_order(n: usize) -> SimpleType {
        (0..n).fold(SimpleType::Base, |acc, _| {
            SimpleType::arrow(SimpleType::Base, acc)
        })
    }

    pub fn is_base(&self) -> bool {
        matches!(self, SimpleType::Base)
    }

    pub fn order(&self) -> usize {
        match self {
            SimpleType::Base => 0,
            SimpleType::Arrow(s, t) => (s.order() + 1).max(t.order()),
        }
    }

    /// Arity, defined only for types of order at most one.
    pub fn arity(&self) -> Option<usize> {
        if self.order() > 1 {
            return None;
        }
        let mut n = 0;
        let mut t = self;
        while let SimpleType::Arrow(_, rest) = t {
            n += 1;
            t = rest;
        }
        Some(n)
    }

    /// Argument types and final codomain.
    pub fn uncurry(&self) -> (Vec<SimpleType>, SimpleType) {
        let mut args = Vec::new();
        let mut t = self;
        while let SimpleType::Arrow(s, rest) = t {
            args.push((**s).clone());
            t = rest;
        }
        (args, t.clone())
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base => write!(f, "i"),
            SimpleType::Arrow(s, t) => {
                if s.is_base() {
                    write!(f, "i -> {}", t)
                } else {
                    write!(f, "({}) -> {}", s, t)
                }
            }
        }
    }
}

/// Proposition types `σ₁ → … → σₙ → o`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PropType {
    pub args: Vec<SimpleType>,
}

impl PropType {
    pub fn new(args: Vec<SimpleType>) -> PropType {
        PropType { args }
    }

    /// A predicate is first-order when every argument has base type.
    pub fn is_first_order(&self) -> bool {
        self.args.iter().all(SimpleType::is_base)
    }
}

impl fmt::Display for PropType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.args {
            if a.is_base() {
                write!(f, "i -> ")?;
            } else {
                write!(f, "({}) -> ", a)?;
            }
        }
        write!(f, "o")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_arity() {
        let i = SimpleType::Base;
        let ii = SimpleType::arrow(i.clone(), i.clone());
        let h = SimpleType::arrow(ii.clone(), i.clone());
        assert_eq!(i.order(), 0);
        assert_eq!(ii.order(), 1);
        assert_eq!(h.order(), 2);
        assert_eq!(SimpleType::first_order(2).arity(), Some(2));
        assert_eq!(h.arity(), None);
        assert_eq!(h.to_string(), "(i -> i) -> i");
    }
}
