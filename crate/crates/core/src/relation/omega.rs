use super::{Attribute, FiniteView};
use crate::error::{Error, Result};
use crate::logic::TruthValue;

/// A finite support with an `S_n`-valued relation on it, usually a similarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSet {
    pub name: String,
    pub support: Vec<String>,
    pub n: u32,
    /// `relation[i][j]` relates `support[i]` to `support[j]`.
    pub relation: Vec<Vec<TruthValue>>,
}

impl OmegaSet {
    /// Crisp equality on `support`.
    pub fn identity(name: &str, support: Vec<String>, n: u32) -> Self {
        let k = support.len();
        let relation = (0..k)
            .map(|i| (0..k).map(|j| TruthValue::from_bool(i == j, n)).collect())
            .collect();
        OmegaSet { name: name.into(), support, n, relation }
    }

    pub fn new(name: &str, support: Vec<String>, relation: Vec<Vec<TruthValue>>, n: u32) -> Result<Self> {
        if relation.len() != support.len() || relation.iter().any(|r| r.len() != support.len()) {
            return Err(Error::Shape(format!("`{name}` needs a square relation")));
        }
        if relation.iter().flatten().any(|v| v.denominator() != n) {
            return Err(Error::ResolutionMismatch(n, 0));
        }
        Ok(OmegaSet { name: name.into(), support, n, relation })
    }

    pub fn get(&self, i: usize, j: usize) -> TruthValue {
        self.relation[i][j]
    }

    /// The relation as a view from attribute `name` to `name'`.
    pub fn to_view(&self) -> FiniteView {
        let a = Attribute::new(self.name.clone(), self.support.clone());
        let b = Attribute::new(format!("{}'", self.name), self.support.clone());
        FiniteView::from_fn(vec![a], vec![b], self.n, |t| self.relation[t[0]][t[1]]).expect("distinct names")
    }
}

fn check_matrix(m: &[Vec<TruthValue>], rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("{what} must be {rows}x{cols}")));
    }
    Ok(())
}

/// `α ⊕ β` on the tagged disjoint union; cross pairs are `0`.
pub fn coproduct(alpha: &OmegaSet, beta: &OmegaSet) -> Result<OmegaSet> {
    if alpha.n != beta.n {
        return Err(Error::ResolutionMismatch(alpha.n, beta.n));
    }
    let n = alpha.n;
    let (ka, kb) = (alpha.support.len(), beta.support.len());
    let support: Vec<String> = alpha
        .support
        .iter()
        .map(|s| format!("{}.{s}", alpha.name))
        .chain(beta.support.iter().map(|s| format!("{}.{s}", beta.name)))
        .collect();
    let mut rel = vec![vec![TruthValue::zero(n); ka + kb]; ka + kb];
    for i in 0..ka {
        for j in 0..ka {
            rel[i][j] = alpha.get(i, j);
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            rel[ka + i][ka + j] = beta.get(i, j);
        }
    }
    OmegaSet::new(&format!("{}+{}", alpha.name, beta.name), support, rel, n)
}

/// Colimit of a parallel pair `f, g : α -> β`, evaluated clause by clause on
/// `A ∐ B`:
///
/// ```text
/// R(x, y) = ⊕_{b,b'∈B} f(x,b) ⊕ f(y,b') ⊕ β(b,b')
///         ⊕ ⊕_{b,b'∈B} g(x,b) ⊕ g(y,b') ⊕ β(b,b')
///         ⊕ ⊕_{a,a'∈A} f(a,x) ⊕ g(a',y) ⊕ α(a,a')
///         ⊕ α(x, y) ⊕ β(x, y)
/// ```
///
/// `f`, `g` are `|A| x |B|` matrices and every term is `0` when an argument
/// falls outside the relevant support.
pub fn coequalize(
    alpha: &OmegaSet,
    beta: &OmegaSet,
    f: &[Vec<TruthValue>],
    g: &[Vec<TruthValue>],
) -> Result<OmegaSet> {
    let (ka, kb) = (alpha.support.len(), beta.support.len());
    check_matrix(f, ka, kb, "f")?;
    check_matrix(g, ka, kb, "g")?;
    let n = alpha.n;
    let zero = TruthValue::zero(n);
    let u = coproduct(alpha, beta)?;
    // x < ka lives in A, otherwise in B
    let in_a = |x: usize| (x < ka).then_some(x);
    let in_b = |x: usize| (x >= ka).then(|| x - ka);
    let fab = |m: &[Vec<TruthValue>], a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => m[a][b],
        _ => zero,
    };
    let sum = |acc: TruthValue, v: TruthValue| acc.strong_sum(v).expect("same resolution");
    let mut rel = vec![vec![zero; ka + kb]; ka + kb];
    for x in 0..ka + kb {
        for y in 0..ka + kb {
            let mut acc = zero;
            for b in 0..kb {
                for b2 in 0..kb {
                    for m in [f, g] {
                        let t = sum(sum(fab(m, in_a(x), Some(b)), fab(m, in_a(y), Some(b2))), beta.get(b, b2));
                        acc = sum(acc, t);
                    }
                }
            }
            for a in 0..ka {
                for a2 in 0..ka {
                    let t = sum(sum(fab(f, Some(a), in_b(x)), fab(g, Some(a2), in_b(y))), alpha.get(a, a2));
                    acc = sum(acc, t);
                }
            }
            acc = sum(acc, u.get(x, y));
            rel[x][y] = acc;
        }
    }
    OmegaSet::new(&format!("coeq({},{})", alpha.name, beta.name), u.support, rel, n)
}

/// `(α ⊸ β)(t, h) = ⋁_{b0,b1} ⊕_a α(a,a) ⊗ t(a,b0) ⊗ h(a,b1) ⊗ β(b0,b1)`
/// for `|A| x |B|` matrices `t` and `h`.
pub fn power_similarity(
    alpha: &OmegaSet,
    beta: &OmegaSet,
    t: &[Vec<TruthValue>],
    h: &[Vec<TruthValue>],
) -> Result<TruthValue> {
    let (ka, kb) = (alpha.support.len(), beta.support.len());
    check_matrix(t, ka, kb, "t")?;
    check_matrix(h, ka, kb, "h")?;
    let mut best = TruthValue::zero(alpha.n);
    for b0 in 0..kb {
        for b1 in 0..kb {
            let mut acc = TruthValue::zero(alpha.n);
            for a in 0..ka {
                let term = alpha.get(a, a).fusion(t[a][b0])?.fusion(h[a][b1])?.fusion(beta.get(b0, b1))?;
                acc = acc.strong_sum(term)?;
            }
            best = best.max(acc);
        }
    }
    Ok(best)
}

/// Reflexivity, symmetry and `⊗`-transitivity, checked exhaustively.
pub fn is_similarity(gamma: &OmegaSet) -> bool {
    let m: Vec<Vec<f64>> = gamma.relation.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect();
    is_similarity_f64(&m, 0.0)
}

/// As [`is_similarity`] on a real matrix, up to `tol`.
pub fn is_similarity_f64(m: &[Vec<f64>], tol: f64) -> bool {
    let k = m.len();
    if m.iter().any(|r| r.len() != k) {
        return false;
    }
    for i in 0..k {
        if (m[i][i] - 1.0).abs() > tol {
            return false;
        }
        for j in 0..k {
            if (m[i][j] - m[j][i]).abs() > tol {
                return false;
            }
            for l in 0..k {
                if (m[i][j] + m[j][l] - 1.0).max(0.0) > m[i][l] + tol {
                    return false;
                }
            }
        }
    }
    true
}

/// `⊗` over `a0, a1, b` of `R(a0,b) ⊗ R(a1,b) ⇒ Γ(a0,a1)`, with `R` given
/// as an `|A| x |B|` matrix.
pub fn is_a_check(r: &[Vec<TruthValue>], gamma: &OmegaSet) -> Result<TruthValue> {
    let ka = gamma.support.len();
    if r.len() != ka {
        return Err(Error::Shape(format!("relation has {} rows, similarity has {ka}", r.len())));
    }
    let mut acc = TruthValue::one(gamma.n);
    for a0 in 0..ka {
        for a1 in 0..ka {
            for b in 0..r[a0].len() {
                acc = acc.fusion(r[a0][b].fusion(r[a1][b])?.residuum(gamma.get(a0, a1))?)?;
            }
        }
    }
    Ok(acc)
}

/// `⊗_b ⊕_a R(a, b) = 1`.
pub fn is_epi(r: &[Vec<TruthValue>]) -> bool {
    let cols = r.first().map_or(0, |row| row.len());
    (0..cols).all(|b| {
        r.iter()
            .try_fold(TruthValue::zero(r[0][b].denominator()), |acc, row| acc.strong_sum(row[b]))
            .map(|v| v.is_one())
            .unwrap_or(false)
    })
}
