use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Predictor, SyntheticDistribution};
use crate::error::{Error, Result};
use crate::space::{FiniteSpace, Space};

/// A distribution on a finite `𝒳 × 𝒴` given by a marginal on `𝒳` and a
/// conditional label law per instance.
#[derive(Clone, Debug)]
pub struct TableDistribution {
    id: String,
    x_space: FiniteSpace,
    y_space: FiniteSpace,
    marginal: Vec<f64>,
    conditional: Vec<Vec<f64>>,
    x_law: WeightedIndex<f64>,
    y_laws: Vec<WeightedIndex<f64>>,
    bayes: Vec<usize>,
    bayes_risk: f64,
}

impl TableDistribution {
    /// Normalizes the weights; rows of `conditional` are indexed by instance.
    pub fn new(
        id: impl Into<String>,
        x_space: FiniteSpace,
        y_space: FiniteSpace,
        marginal: Vec<f64>,
        conditional: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if marginal.len() != x_space.len() || conditional.len() != x_space.len() {
            return Err(Error::Format(format!(
                "table has {} marginal weights and {} rows for {} instances",
                marginal.len(),
                conditional.len(),
                x_space.len()
            )));
        }
        let marginal = normalize(&marginal, "marginal")?;
        let conditional = conditional
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != y_space.len() {
                    return Err(Error::Format(format!(
                        "conditional row {i} has {} entries for {} labels",
                        row.len(),
                        y_space.len()
                    )));
                }
                normalize(row, &format!("conditional row {i}"))
            })
            .collect::<Result<Vec<_>>>()?;
        let x_law = WeightedIndex::new(&marginal).map_err(|e| Error::Format(e.to_string()))?;
        let y_laws = conditional
            .iter()
            .map(|row| WeightedIndex::new(row).map_err(|e| Error::Format(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let mut d = TableDistribution {
            id: id.into(),
            x_space,
            y_space,
            marginal,
            conditional,
            x_law,
            y_laws,
            bayes: Vec::new(),
            bayes_risk: 0.0,
        };
        d.bayes = (0..d.x_space.len())
            .map(|x| d.pointwise_medoid(&[x]).expect("nonempty region"))
            .collect();
        d.bayes_risk = d.risk_of(|x| d.bayes[*x]);
        Ok(d)
    }

    /// One instance, labels uniform on `{a, b, c}` of the four-point space.
    pub fn singleton4() -> Self {
        let third = 1.0 / 3.0;
        let mut d = TableDistribution::new(
            "singleton4",
            FiniteSpace::singleton(),
            FiniteSpace::four_point(),
            vec![1.0],
            vec![vec![third, third, third, 0.0]],
        )
        .expect("valid table");
        // closed form: every label is at distance 1/2 from o
        d.bayes_risk = 0.5;
        d
    }

    /// `x_size` instances on a line (`ℓ(xᵢ, xⱼ) = |i − j|`), `y_size` labels
    /// under the discrete metric, uniform marginal and conditional rows drawn
    /// from a flat Dirichlet seeded by `table_seed`.
    pub fn random_multiclass(x_size: usize, y_size: usize, table_seed: u64) -> Result<Self> {
        if x_size == 0 || y_size == 0 {
            return Err(Error::pre("finite_multiclass needs at least one instance and one label"));
        }
        let x_names: Vec<String> = (0..x_size).map(|i| format!("x{i}")).collect();
        let line: Vec<f64> = (0..x_size * x_size)
            .map(|k| (k / x_size).abs_diff(k % x_size) as f64)
            .collect();
        let x_space = FiniteSpace::from_matrix(format!("line:{x_size}"), x_names, line)?;
        let y_names: Vec<String> = (0..y_size).map(|i| format!("y{i}")).collect();
        let y_space = FiniteSpace::discrete(&y_names)?;
        let mut rng = ChaCha8Rng::seed_from_u64(table_seed);
        let conditional = (0..x_size)
            .map(|_| (0..y_size).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect())
            .collect();
        TableDistribution::new("finite_multiclass", x_space, y_space, vec![1.0; x_size], conditional)
    }

    /// Reads `x,weight,<label>...` rows; instances use the discrete metric
    /// and labels the discrete metric on the header's label names.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path)?;
        let header = reader.headers()?.clone();
        if header.len() < 3 || &header[0] != "x" || &header[1] != "weight" {
            return Err(Error::Format(format!(
                "{}: header must be `x,weight,<label>...`",
                path.display()
            )));
        }
        let y_names: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
        let (mut x_names, mut marginal, mut conditional) = (Vec::new(), Vec::new(), Vec::new());
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let line = i + 2;
            let num = |s: &str| -> Result<f64> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("{}:{line}: `{s}` is not a number", path.display())))
            };
            if record.len() != header.len() {
                return Err(Error::Format(format!("{}:{line}: wrong number of fields", path.display())));
            }
            x_names.push(record[0].to_string());
            marginal.push(num(&record[1])?);
            conditional.push(record.iter().skip(2).map(num).collect::<Result<Vec<_>>>()?);
        }
        let x_space = FiniteSpace::discrete(&x_names)?;
        let y_space = FiniteSpace::discrete(&y_names)?;
        TableDistribution::new("finite_multiclass", x_space, y_space, marginal, conditional)
    }

    pub fn marginal(&self) -> &[f64] {
        &self.marginal
    }

    pub fn conditional(&self, x: usize) -> &[f64] {
        &self.conditional[x]
    }

    /// `E[ℓ(y, Y) | X = x]`.
    pub fn conditional_cost(&self, x: usize, y: usize) -> f64 {
        self.conditional[x]
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(y2, p)| p * self.y_space.dist(&y, &y2))
            .sum()
    }

    /// `argmin_y Σ_{x ∈ region} μ(x) E[ℓ(y, Y) | X = x]`, ties to the
    /// order-first label.
    pub(crate) fn pointwise_medoid(&self, region: &[usize]) -> Result<usize> {
        if region.is_empty() {
            return Err(Error::pre("empty region"));
        }
        if let Some(&x) = region.iter().find(|&&x| x >= self.x_space.len()) {
            return Err(Error::InvalidElement { space: self.x_space.id().to_string(), detail: format!("index {x}") });
        }
        let mut best = (0, f64::INFINITY);
        for y in 0..self.y_space.len() {
            let cost: f64 = region.iter().map(|&x| self.marginal[x] * self.conditional_cost(x, y)).sum();
            if cost < best.1 {
                best = (y, cost);
            }
        }
        Ok(best.0)
    }

    fn risk_of(&self, f: impl Fn(&usize) -> usize) -> f64 {
        (0..self.x_space.len())
            .filter(|&x| self.marginal[x] > 0.0)
            .map(|x| self.marginal[x] * self.conditional_cost(x, f(&x)))
            .sum()
    }
}

fn normalize(w: &[f64], what: &str) -> Result<Vec<f64>> {
    if w.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::Format(format!("{what}: weights must be finite and nonnegative")));
    }
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Format(format!("{what}: weights sum to zero")));
    }
    Ok(w.iter().map(|p| p / total).collect())
}

impl SyntheticDistribution for TableDistribution {
    type XS = FiniteSpace;
    type YS = FiniteSpace;

    fn id(&self) -> &str {
        &self.id
    }

    fn x_space(&self) -> &FiniteSpace {
        &self.x_space
    }

    fn y_space(&self) -> &FiniteSpace {
        &self.y_space
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> (usize, usize) {
        let x = self.x_law.sample(rng);
        (x, self.y_laws[x].sample(rng))
    }

    fn bayes_risk(&self) -> Option<f64> {
        Some(self.bayes_risk)
    }

    fn bayes_predict(&self, x: &usize) -> Option<usize> {
        self.bayes.get(*x).copied()
    }

    fn exact_risk(&self, predictor: Predictor<'_, usize, usize>) -> Result<f64> {
        match predictor {
            Predictor::Bayes => Ok(self.bayes_risk),
            Predictor::Custom(f) => {
                for x in 0..self.x_space.len() {
                    self.y_space.check(&f(&x))?;
                }
                Ok(self.risk_of(f))
            }
        }
    }

    fn has_exact_risk(&self) -> bool {
        true
    }

    fn loss_cap(&self) -> Option<f64> {
        Some(self.y_space.diameter())
    }
}
