use std::cmp::Ordering;
use std::fmt;

use crate::featurize::FeatureVector;

use super::tree::{Branch, MethodTree, TreeBank};
use super::RecommendError;

/// A feature vector labelled 1 if the target method was the recorded choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataPoint {
    pub features: FeatureVector,
    pub label: u8,
}

impl DataPoint {
    /// Renders as `method, [..]` for positives and `not, [..]` for negatives.
    pub fn display_for<'a>(&'a self, method: &'a str) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a DataPoint, &'a str);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let tag = if self.0.label == 1 { self.1 } else { "not" };
                write!(f, "{tag}, {}", self.0.features)
            }
        }
        Show(self, method)
    }
}

/// One-vs-rest view of a labelled corpus: every entry whose method differs
/// from `target` becomes a negative example.
pub fn extract_datapoints(corpus: &[(FeatureVector, String)], target: &str) -> Vec<DataPoint> {
    corpus
        .iter()
        .map(|(v, m)| DataPoint { features: v.clone(), label: u8::from(m == target) })
        .collect()
}

#[derive(Clone, Copy, Default)]
struct Counts {
    n: u64,
    pos: u64,
}

impl Counts {
    fn of<'a>(points: impl Iterator<Item = &'a DataPoint>) -> Self {
        points.fold(Counts::default(), |c, p| Counts { n: c.n + 1, pos: c.pos + u64::from(p.label) })
    }

    fn mean(self) -> Option<f64> {
        (self.n > 0).then(|| self.pos as f64 / self.n as f64)
    }
}

/// Sum of squared errors of a split, as an exact fraction num/den. For 0/1
/// labels a side with n points and p positives contributes p(n-p)/n.
fn split_cost(a: Counts, b: Counts) -> (u128, u128) {
    let sse = |c: Counts| (u128::from(c.pos) * u128::from(c.n - c.pos), u128::from(c.n));
    match (a.n, b.n) {
        (0, 0) => (0, 1),
        (0, _) => sse(b),
        (_, 0) => sse(a),
        _ => {
            let ((na, da), (nb, db)) = (sse(a), sse(b));
            (na * db + nb * da, da * db)
        }
    }
}

fn cmp_fraction(x: (u128, u128), y: (u128, u128)) -> Ordering {
    (x.0 * y.1).cmp(&(y.0 * x.1))
}

/// Assertion minimizing post-split squared error; lowest index on ties.
fn best_split(points: &[&DataPoint], k: usize) -> usize {
    let mut best = (0usize, (u128::MAX, 1u128));
    for a in 0..k {
        let on = Counts::of(points.iter().copied().filter(|p| p.features.get(a) == Some(true)));
        let off = Counts::of(points.iter().copied().filter(|p| p.features.get(a) != Some(true)));
        let cost = split_cost(on, off);
        if a == 0 || cmp_fraction(cost, best.1) == Ordering::Less {
            best = (a, cost);
        }
    }
    best.0
}

fn grow_branch(points: &[&DataPoint], k: usize, inherited: f64) -> Branch {
    if points.is_empty() {
        return Branch { assertion: 0, if_true: inherited, if_false: inherited };
    }
    let here = Counts::of(points.iter().copied()).mean().unwrap_or(inherited);
    let a = best_split(points, k);
    let side = |want: bool| {
        Counts::of(points.iter().copied().filter(|p| p.features.get(a) == Some(want))).mean().unwrap_or(here)
    };
    Branch { assertion: a, if_true: side(true), if_false: side(false) }
}

/// Greedy height-2 regression tree with squared-error splits.
pub fn train_tree(points: &[DataPoint], method: &str) -> Result<MethodTree, RecommendError> {
    let k = points.first().ok_or(RecommendError::EmptyTrainingSet(method.to_string()))?.features.len();
    if let Some(p) = points.iter().find(|p| p.features.len() != k) {
        return Err(RecommendError::ConfigMismatch { needed: k, got: p.features.len() });
    }
    let all: Vec<&DataPoint> = points.iter().collect();
    let overall = Counts::of(all.iter().copied()).mean().unwrap_or(0.0);
    let root = best_split(&all, k);
    let (on, off): (Vec<&DataPoint>, Vec<&DataPoint>) = all.into_iter().partition(|p| p.features.get(root) == Some(true));
    Ok(MethodTree {
        method: method.to_string(),
        root,
        on_true: grow_branch(&on, k, overall),
        on_false: grow_branch(&off, k, overall),
    })
}

/// Trains one tree per method over a corpus of (features, chosen method).
pub fn train_bank(corpus: &[(FeatureVector, String)], methods: &[&str]) -> Result<TreeBank, RecommendError> {
    let trees = methods
        .iter()
        .map(|m| train_tree(&extract_datapoints(corpus, m), m))
        .collect::<Result<Vec<_>, _>>()?;
    TreeBank::new(trees)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(bits: &[u8]) -> FeatureVector {
        FeatureVector::new(bits.iter().map(|b| *b == 1).collect())
    }

    #[test]
    fn one_vs_rest_labels() {
        let corpus = vec![(fv(&[1, 0]), "simp".to_string()), (fv(&[0, 1]), "induct".to_string())];
        let pts = extract_datapoints(&corpus, "simp");
        assert_eq!(pts.iter().map(|p| p.label).collect::<Vec<_>>(), [1, 0]);
        assert!(extract_datapoints(&corpus, "cases").iter().all(|p| p.label == 0));
        assert_eq!(pts[1].display_for("simp").to_string(), "not, [0,1]");
        assert_eq!(pts[0].display_for("simp").to_string(), "simp, [1,0]");
    }

    #[test]
    fn count_of_positive_labels() {
        let corpus: Vec<_> =
            (0..10).map(|i| (fv(&[i % 2]), if i < 3 { "simp" } else { "auto" }.to_string())).collect();
        assert_eq!(extract_datapoints(&corpus, "simp").iter().filter(|p| p.label == 1).count(), 3);
    }

    #[test]
    fn label_equal_to_bit_three() {
        // All 8 patterns of bits (0, 1, 3); bit 2 constant. Only bit 3 splits perfectly.
        let points: Vec<DataPoint> = (0..8u8)
            .map(|i| {
                let (b0, b1, b3) = (i & 1, (i >> 1) & 1, (i >> 2) & 1);
                DataPoint { features: fv(&[b0, b1, 0, b3]), label: b3 }
            })
            .collect();
        let t = train_tree(&points, "m").unwrap();
        assert_eq!(t.root, 3);
        assert_eq!((t.on_true.if_true, t.on_true.if_false), (1.0, 1.0));
        assert_eq!((t.on_false.if_true, t.on_false.if_false), (0.0, 0.0));
    }

    #[test]
    fn all_negative_gives_zero_leaves() {
        let points: Vec<DataPoint> =
            (0..6u8).map(|i| DataPoint { features: fv(&[i & 1, (i >> 1) & 1]), label: 0 }).collect();
        assert_eq!(train_tree(&points, "m").unwrap().leaves(), [0.0; 4]);
    }

    #[test]
    fn identical_features_give_uniform_leaves() {
        let points: Vec<DataPoint> = (0..6u8).map(|i| DataPoint { features: fv(&[1, 0, 1]), label: i % 2 }).collect();
        let t = train_tree(&points, "m").unwrap();
        assert_eq!(t.leaves(), [0.5; 4]);
        assert_eq!(t.root, 0);
        assert_eq!(t.on_false.assertion, 0);
    }

    #[test]
    fn empty_training_set_is_rejected() {
        assert!(matches!(train_tree(&[], "m"), Err(RecommendError::EmptyTrainingSet(_))));
    }

    #[test]
    fn bank_is_sorted_and_sized() {
        let corpus = vec![(fv(&[1, 0]), "simp".to_string()), (fv(&[0, 1]), "induct".to_string())];
        let bank = train_bank(&corpus, &["simp", "auto", "induct"]).unwrap();
        let names: Vec<_> = bank.trees().iter().map(|t| t.method.as_str()).collect();
        assert_eq!(names, ["auto", "induct", "simp"]);
        assert_eq!(bank.leaf_count(), 12);
    }
}
