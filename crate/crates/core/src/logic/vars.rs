use super::ast::{Formula, Sort};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarEntry {
    pub name: String,
    pub sort: Sort,
}

/// Ordered variables; a variable's bit position is its index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VarTable {
    entries: Vec<VarEntry>,
}

impl VarTable {
    pub fn new() -> Self {
        VarTable::default()
    }

    /// Table over the given names, sorts taken from their case.
    pub fn from_names<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self, LogicError> {
        let mut t = VarTable::new();
        for n in names {
            t.push(n.as_ref(), Sort::of_name(n.as_ref()))?;
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VarEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn sort(&self, name: &str) -> Option<Sort> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.sort)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    /// Appends `name` unless present; returns its position.
    pub fn push(&mut self, name: &str, sort: Sort) -> Result<usize, LogicError> {
        match self.entries.iter().position(|e| e.name == name) {
            Some(i) if self.entries[i].sort == sort => Ok(i),
            Some(_) => Err(LogicError::SortClash(name.to_string())),
            None => {
                self.entries.push(VarEntry {
                    name: name.to_string(),
                    sort,
                });
                Ok(self.entries.len() - 1)
            }
        }
    }
}

/// Appends the free variables of `f` to `ambient` in order of first
/// occurrence. Bound variables never enter the table.
pub fn build_var_table(f: &Formula, ambient: Option<&VarTable>) -> Result<VarTable, LogicError> {
    let mut table = ambient.cloned().unwrap_or_default();
    for v in f.free_vars() {
        table.push(&v, Sort::of_name(&v))?;
    }
    Ok(table)
}
