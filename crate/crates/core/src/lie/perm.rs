use crate::word::GroupValue;

/// A permutation of `{0, ..., n-1}`; an exact target for word evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut p: Vec<u32> = (0..n as u32).collect();
        p.shuffle(rng);
        Perm(p)
    }
}

/// Composition as functions: `(a.compose(b))(i) = a(b(i))`.
impl GroupValue for Perm {
    fn compose(&self, other: &Self) -> Self {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Perm(inv)
    }
}
