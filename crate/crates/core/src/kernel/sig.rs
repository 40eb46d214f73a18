use indexmap::IndexMap;

use super::term::Sym;
use super::types::{PropType, SimpleType};
use super::KernelError;

/// Read access to declared symbols. Implemented by [`Signature`] and by
/// [`Extended`], which layers eigenvariables over a base signature.
pub trait SymbolTable {
    fn const_type(&self, name: &str) -> Option<&SimpleType>;
    fn pred_type(&self, name: &str) -> Option<&PropType>;
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub consts: IndexMap<Sym, SimpleType>,
    pub preds: IndexMap<Sym, PropType>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn add_const(&mut self, name: Sym, ty: SimpleType) -> Result<(), KernelError> {
        if self.consts.contains_key(&name) {
            return Err(KernelError::Duplicate(name.to_string()));
        }
        self.consts.insert(name, ty);
        Ok(())
    }

    pub fn add_pred(&mut self, name: Sym, ty: PropType) -> Result<(), KernelError> {
        if self.preds.contains_key(&name) {
            return Err(KernelError::Duplicate(name.to_string()));
        }
        self.preds.insert(name, ty);
        Ok(())
    }

    /// Every term symbol has order at most one.
    pub fn is_first_order(&self) -> bool {
        self.consts.values().all(|t| t.order() <= 1)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.consts.get(name).and_then(|t| t.arity())
    }

    pub fn with<'a>(&'a self, extra: &'a [(Sym, SimpleType)]) -> Extended<'a> {
        Extended { base: self, extra }
    }
}

impl SymbolTable for Signature {
    fn const_type(&self, name: &str) -> Option<&SimpleType> {
        self.consts.get(name)
    }

    fn pred_type(&self, name: &str) -> Option<&PropType> {
        self.preds.get(name)
    }
}

/// A signature extended by eigenvariables (fresh constants).
#[derive(Clone, Copy, Debug)]
pub struct Extended<'a> {
    pub base: &'a Signature,
    pub extra: &'a [(Sym, SimpleType)],
}

impl SymbolTable for Extended<'_> {
    fn const_type(&self, name: &str) -> Option<&SimpleType> {
        self.extra
            .iter()
            .rev()
            .find(|(n, _)| &**n == name)
            .map(|(_, t)| t)
            .or_else(|| self.base.const_type(name))
    }

    fn pred_type(&self, name: &str) -> Option<&PropType> {
        self.base.preds.get(name)
    }
}

/// Typing context; the last entry is de Bruijn index 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub entries: Vec<(Sym, SimpleType)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn from_entries(entries: Vec<(Sym, SimpleType)>) -> Context {
        Context { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: Sym, ty: SimpleType) {
        self.entries.push((name, ty));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn pushed(&self, name: Sym, ty: SimpleType) -> Context {
        let mut c = self.clone();
        c.push(name, ty);
        c
    }

    pub fn get(&self, index: usize) -> Option<&(Sym, SimpleType)> {
        let n = self.entries.len();
        if index < n {
            Some(&self.entries[n - 1 - index])
        } else {
            None
        }
    }

    pub fn types(&self) -> Vec<SimpleType> {
        self.entries.iter().map(|(_, t)| t.clone()).collect()
    }
}
