use crate::error::{PdlaError, Result};

/// One logged change of a variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarUpdate {
    pub id: usize,
    pub old: f64,
    pub new: f64,
}

/// Nonnegative variables that may only grow.
///
/// Ids are dense indices; reading an id never written returns 0.
#[derive(Clone, Debug, Default)]
pub struct MonotoneVarStore {
    values: Vec<f64>,
    history: Option<Vec<VarUpdate>>,
}

impl MonotoneVarStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(len: usize) -> Self {
        MonotoneVarStore {
            values: vec![0.0; len],
            history: None,
        }
    }

    /// Starts logging every subsequent update.
    pub fn track_history(mut self) -> Self {
        self.history = Some(Vec::new());
        self
    }

    pub fn get(&self, id: usize) -> f64 {
        self.values.get(id).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn history(&self) -> Option<&[VarUpdate]> {
        self.history.as_deref()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Adds `delta` to variable `id`. A zero delta is a no-op; negative or
    /// non-finite deltas are refused and leave the store untouched.
    pub fn increase(&mut self, id: usize, delta: f64) -> Result<f64> {
        let old = self.get(id);
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(PdlaError::NonMonotone {
                id,
                old,
                new: old + delta,
            });
        }
        if delta == 0.0 {
            return Ok(old);
        }
        self.set(id, old + delta)
    }

    /// Raises variable `id` to `new`, which must exceed the current value.
    pub fn set(&mut self, id: usize, new: f64) -> Result<f64> {
        let old = self.get(id);
        if !(new.is_finite() && new > old) {
            return Err(PdlaError::NonMonotone { id, old, new });
        }
        if id >= self.values.len() {
            self.values.resize(id + 1, 0.0);
        }
        self.values[id] = new;
        if let Some(h) = self.history.as_mut() {
            h.push(VarUpdate { id, old, new });
        }
        Ok(new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grows_on_demand() {
        let mut s = MonotoneVarStore::new().track_history();
        assert_eq!(s.get(5), 0.0);
        s.increase(5, 0.5).unwrap();
        s.increase(5, 0.25).unwrap();
        assert_eq!(s.get(5), 0.75);
        assert_eq!(s.len(), 6);
        assert_eq!(
            s.history().unwrap(),
            &[
                VarUpdate {
                    id: 5,
                    old: 0.0,
                    new: 0.5
                },
                VarUpdate {
                    id: 5,
                    old: 0.5,
                    new: 0.75
                }
            ]
        );
    }

    #[test]
    fn refuses_decrease() {
        let mut s = MonotoneVarStore::with_len(2);
        s.set(1, 0.4).unwrap();
        assert!(s.set(1, 0.3).is_err());
        assert!(s.set(1, 0.4).is_err());
        assert!(s.increase(1, -0.1).is_err());
        assert!(s.increase(0, f64::NAN).is_err());
        assert_eq!(s.get(1), 0.4);
    }

    proptest! {
        #[test]
        fn arbitrary_sequences_stay_monotone(ops in prop::collection::vec((0usize..6, -1.0f64..2.0), 0..60)) {
            let mut s = MonotoneVarStore::new().track_history();
            let mut shadow = [0.0f64; 6];
            for (id, delta) in ops {
                let r = s.increase(id, delta);
                if delta < 0.0 {
                    prop_assert!(r.is_err());
                } else {
                    prop_assert!(r.is_ok());
                    shadow[id] += delta;
                }
                for (k, v) in shadow.iter().enumerate() {
                    prop_assert_eq!(s.get(k), *v);
                }
            }
            for u in s.history().unwrap() {
                prop_assert!(u.new > u.old);
                prop_assert!(u.old >= 0.0);
            }
        }
    }
}
