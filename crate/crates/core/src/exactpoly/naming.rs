/// Display names for flat variable indices.
///
/// The default convention interleaves coordinate pairs, `x1, y1, x2, y2, …`,
/// and names a single trailing unpaired coordinate `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableNaming {
    names: Vec<String>,
}

impl VariableNaming {
    pub fn interleaved(nvars: usize) -> Self {
        let mut names = Vec::with_capacity(nvars);
        for k in 0..nvars / 2 {
            names.push(format!("x{}", k + 1));
            names.push(format!("y{}", k + 1));
        }
        if nvars % 2 == 1 {
            names.push("z".to_string());
        }
        VariableNaming { names }
    }

    /// Custom names; `None` if any name repeats.
    pub fn custom(names: Vec<String>) -> Option<Self> {
        let mut seen = std::collections::HashSet::new();
        names
            .iter()
            .all(|n| seen.insert(n.as_str()))
            .then_some(VariableNaming { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaved_layout() {
        let n = VariableNaming::interleaved(5);
        assert_eq!(n.names(), ["x1", "y1", "x2", "y2", "z"]);
        assert_eq!(n.index_of("x2"), Some(2));
        assert_eq!(n.index_of("w"), None);
    }

    #[test]
    fn naming_is_bijective() {
        let n = VariableNaming::interleaved(12);
        for i in 0..12 {
            assert_eq!(n.index_of(n.name(i)), Some(i));
        }
        assert!(VariableNaming::custom(vec!["a".into(), "a".into()]).is_none());
    }
}
