//! The Boolean (measure-theoretic) counterpart: eventualities are subsets of
//! a finite sample set carrying an ordinary probability measure.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalModel {
    points: Vec<String>,
    measure: Vec<f64>,
}

impl ClassicalModel {
    pub fn new(points: Vec<String>, measure: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidClassicalModel("no sample points".into()));
        }
        if points.len() != measure.len() {
            return Err(Error::InvalidClassicalModel(format!(
                "{} sample points but {} weights",
                points.len(),
                measure.len()
            )));
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::InvalidClassicalModel(
                "duplicate sample point".into(),
            ));
        }
        if let Some((p, w)) = points
            .iter()
            .zip(&measure)
            .find(|(_, w)| !(0.0..=1.0).contains(*w))
        {
            return Err(Error::InvalidClassicalModel(format!(
                "weight {w} of `{p}` outside [0, 1]"
            )));
        }
        let total: f64 = measure.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidClassicalModel(format!(
                "measure sums to {total}, not 1"
            )));
        }
        Ok(Self { points, measure })
    }

    /// Equal weight on every point.
    pub fn uniform(points: Vec<String>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let measure = vec![w; points.len()];
        Self::new(points, measure)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn event<S: AsRef<str>>(&self, members: &[S]) -> Result<ClassicalEventuality<'_>> {
        let members = members
            .iter()
            .map(|m| {
                let m = m.as_ref();
                self.points
                    .iter()
                    .position(|p| p == m)
                    .ok_or_else(|| Error::UnknownSamplePoint(m.to_string()))
            })
            .collect::<Result<BTreeSet<usize>>>()?;
        Ok(ClassicalEventuality {
            model: self,
            members,
        })
    }

    pub fn certain(&self) -> ClassicalEventuality<'_> {
        ClassicalEventuality {
            model: self,
            members: (0..self.points.len()).collect(),
        }
    }

    pub fn null(&self) -> ClassicalEventuality<'_> {
        ClassicalEventuality {
            model: self,
            members: BTreeSet::new(),
        }
    }
}

/// A subset of the sample points of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEventuality<'m> {
    model: &'m ClassicalModel,
    members: BTreeSet<usize>,
}

impl<'m> ClassicalEventuality<'m> {
    pub fn members(&self) -> impl Iterator<Item = &'m str> + '_ {
        self.members.iter().map(|&i| self.model.points[i].as_str())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// P{e}: the measure summed over members.
    pub fn probability(&self) -> f64 {
        self.members.iter().map(|&i| self.model.measure[i]).sum()
    }

    pub fn meet(&self, other: &ClassicalEventuality<'m>) -> Result<ClassicalEventuality<'m>> {
        self.same_model(other)?;
        Ok(self.with(self.members.intersection(&other.members).copied().collect()))
    }

    pub fn join(&self, other: &ClassicalEventuality<'m>) -> Result<ClassicalEventuality<'m>> {
        self.same_model(other)?;
        Ok(self.with(self.members.union(&other.members).copied().collect()))
    }

    pub fn complement(&self) -> ClassicalEventuality<'m> {
        self.with(
            (0..self.model.points.len())
                .filter(|i| !self.members.contains(i))
                .collect(),
        )
    }

    pub fn leq(&self, other: &ClassicalEventuality<'m>) -> Result<bool> {
        self.same_model(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    fn with(&self, members: BTreeSet<usize>) -> ClassicalEventuality<'m> {
        ClassicalEventuality {
            model: self.model,
            members,
        }
    }

    fn same_model(&self, other: &ClassicalEventuality<'m>) -> Result<()> {
        if std::ptr::eq(self.model, other.model) || self.model == other.model {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin(heads: f64) -> ClassicalModel {
        ClassicalModel::new(
            vec!["heads".into(), "tails".into()],
            vec![heads, 1.0 - heads],
        )
        .unwrap()
    }

    #[test]
    fn unbiased_coin() {
        let m = coin(0.5);
        assert_eq!(m.event(&["heads"]).unwrap().probability(), 0.5);
        assert_eq!(m.event(&["tails"]).unwrap().probability(), 0.5);
        assert_eq!(m.certain().probability(), 1.0);
        assert_eq!(m.null().probability(), 0.0);
    }

    #[test]
    fn biased_coin_sum_rule() {
        let m = coin(0.7);
        let e1 = m.event(&["heads"]).unwrap();
        let e2 = m.event(&["tails"]).unwrap();
        let joined = e1.join(&e2).unwrap().probability();
        let met = e1.meet(&e2).unwrap().probability();
        assert_eq!(met, 0.0);
        assert_eq!(joined, e1.probability() + e2.probability() - met);
        assert_eq!(joined, 1.0);
    }

    #[test]
    fn set_operations() {
        let m = ClassicalModel::uniform(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let ab = m.event(&["a", "b"]).unwrap();
        let bc = m.event(&["b", "c"]).unwrap();
        assert_eq!(ab.meet(&bc).unwrap().members().collect::<Vec<_>>(), ["b"]);
        assert_eq!(ab.complement().members().collect::<Vec<_>>(), ["c"]);
        assert!(ab.meet(&bc).unwrap().leq(&ab).unwrap());
    }

    #[test]
    fn invalid_models() {
        assert!(ClassicalModel::new(vec!["a".into()], vec![0.9]).is_err());
        assert!(ClassicalModel::new(vec!["a".into(), "b".into()], vec![1.5, -0.5]).is_err());
        assert!(ClassicalModel::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]).is_err());
        assert!(ClassicalModel::new(vec![], vec![]).is_err());
        assert!(matches!(
            coin(0.5).event(&["edge"]),
            Err(Error::UnknownSamplePoint(_))
        ));
    }

    #[test]
    fn events_from_different_models_do_not_mix() {
        let a = coin(0.5);
        let b = coin(0.25);
        assert!(a.certain().join(&b.certain()).is_err());
    }
}
