use std::cmp::Ordering;
use std::io::Read;
use std::path::Path;

use super::Space;
use crate::error::{Error, Result};

/// A finite space given by a loss matrix over named points.
///
/// Points are indices into the name list. Construction order is both the
/// total order and the enumeration ω (ω(i) = i + 1); the anchor is the first
/// point.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    id: String,
    names: Vec<String>,
    loss: Vec<f64>,
    diameter: f64,
    metric: bool,
}

impl FiniteSpace {
    pub fn from_matrix(id: impl Into<String>, names: Vec<String>, loss: Vec<f64>) -> Result<Self> {
        let id = id.into();
        let k = names.len();
        if k == 0 {
            return Err(Error::Format(format!("space `{id}` has no points")));
        }
        if loss.len() != k * k {
            return Err(Error::Format(format!(
                "space `{id}`: loss matrix has {} entries, expected {k}x{k}",
                loss.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::Format(format!("space `{id}`: duplicate point name `{n}`")));
            }
        }
        let diameter = loss.iter().cloned().fold(0.0, f64::max);
        let mut space = FiniteSpace { id, names, loss, diameter, metric: true };
        let probe: Vec<usize> = (0..k).collect();
        space.metric = super::validate_metric_axioms(&space, &probe).is_empty();
        Ok(space)
    }

    /// `{a, b, c, o}` with `ℓ(a,b)=ℓ(b,c)=ℓ(c,a)=1` and `ℓ(o,·)=1/2`.
    pub fn four_point() -> Self {
        let names = ["a", "b", "c", "o"].map(String::from).to_vec();
        #[rustfmt::skip]
        let loss = vec![
            0.0, 1.0, 1.0, 0.5,
            1.0, 0.0, 1.0, 0.5,
            1.0, 1.0, 0.0, 0.5,
            0.5, 0.5, 0.5, 0.0,
        ];
        FiniteSpace::from_matrix("four_point", names, loss).expect("valid matrix")
    }

    /// Discrete metric over the given alphabet.
    pub fn discrete<S: AsRef<str>>(alphabet: &[S]) -> Result<Self> {
        let names: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        let k = names.len();
        let loss = (0..k * k)
            .map(|ij| if ij / k == ij % k { 0.0 } else { 1.0 })
            .collect();
        let id = format!("discrete:{}", names.join(","));
        FiniteSpace::from_matrix(id, names, loss)
    }

    pub fn singleton() -> Self {
        FiniteSpace::from_matrix("singleton", vec!["x".into()], vec![0.0]).expect("valid matrix")
    }

    /// Reads a square loss matrix: a header row of point names (first cell
    /// ignored), then one row per point, led by its name.
    pub fn from_csv<R: Read>(id: impl Into<String>, reader: R) -> Result<Self> {
        let id = id.into();
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().skip(1).map(|s| s.trim().to_string()).collect();
        let mut loss = Vec::with_capacity(header.len() * header.len());
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = row + 2;
            let name = rec.get(0).unwrap_or("").trim();
            if header.get(row).map(String::as_str) != Some(name) {
                return Err(Error::Format(format!(
                    "line {line}: row name `{name}` does not match column {}",
                    row + 1
                )));
            }
            if rec.len() != header.len() + 1 {
                return Err(Error::Format(format!(
                    "line {line}: expected {} entries, got {}",
                    header.len(),
                    rec.len().saturating_sub(1)
                )));
            }
            for field in rec.iter().skip(1) {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("line {line}: `{field}` is not a number")))?;
                loss.push(v);
            }
        }
        FiniteSpace::from_matrix(id, header, loss)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        FiniteSpace::from_csv(format!("csv:{}", path.display()), file)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse_point(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::InvalidElement {
            space: self.id.clone(),
            detail: format!("unknown point `{name}`"),
        })
    }
}

impl Space for FiniteSpace {
    type Point = usize;

    fn id(&self) -> &str {
        &self.id
    }

    fn dist(&self, a: &usize, b: &usize) -> f64 {
        self.loss[a * self.names.len() + b]
    }

    fn order(&self, a: &usize, b: &usize) -> Ordering {
        a.cmp(b)
    }

    fn check(&self, p: &usize) -> Result<()> {
        if *p < self.names.len() {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                space: self.id.clone(),
                detail: format!("index {p} out of range for {} points", self.names.len()),
            })
        }
    }

    fn diameter(&self) -> f64 {
        self.diameter
    }

    fn is_metric(&self) -> bool {
        self.metric
    }

    fn anchor(&self) -> Option<usize> {
        Some(0)
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.names.len())
    }

    fn enumerate(&self) -> Option<Box<dyn Iterator<Item = usize> + '_>> {
        Some(Box::new(0..self.names.len()))
    }

    /// The whole space is an ε-net for every ε > 0.
    fn eps_net(&self, eps: f64) -> Option<Vec<usize>> {
        (eps > 0.0).then(|| (0..self.names.len()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_of_four_point() {
        let text = "name,a,b,c,o\na,0,1,1,0.5\nb,1,0,1,0.5\nc,1,1,0,0.5\no,0.5,0.5,0.5,0\n";
        let s = FiniteSpace::from_csv("fp", text.as_bytes()).unwrap();
        let fp = FiniteSpace::four_point();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(s.dist(&i, &j), fp.dist(&i, &j));
            }
        }
        assert!(s.is_metric());
        assert_eq!(s.diameter(), 1.0);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let bad = "name,a,b\na,0,1\nb,1,x\n";
        let err = FiniteSpace::from_csv("bad", bad.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let ragged = "name,a,b\na,0,1\nc,1,0\n";
        assert!(FiniteSpace::from_csv("bad", ragged.as_bytes()).is_err());
    }

    #[test]
    fn non_metric_loss_is_flagged() {
        let names = vec!["p".into(), "q".into(), "r".into()];
        #[rustfmt::skip]
        let loss = vec![
            0.0, 1.0, 5.0,
            1.0, 0.0, 1.0,
            5.0, 1.0, 0.0,
        ];
        let s = FiniteSpace::from_matrix("sq", names, loss).unwrap();
        assert!(!s.is_metric());
    }

    #[test]
    fn discrete_and_singleton() {
        let d = FiniteSpace::discrete(&["u", "v", "w"]).unwrap();
        assert_eq!(d.dist(&0, &2), 1.0);
        assert_eq!(d.id(), "discrete:u,v,w");
        assert_eq!(FiniteSpace::singleton().cardinality(), Some(1));
    }
}
