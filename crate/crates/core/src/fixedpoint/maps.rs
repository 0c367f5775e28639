use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::FiniteSpace;

/// A total self-map of a finite space, stored as an index table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMap {
    image: Vec<usize>,
}

/// Map JSON: `{"map": {label: label, ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub map: BTreeMap<String, String>,
}

/// MultiMap JSON: `{"map": {label: [label, ...], ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiMapSpec {
    pub map: BTreeMap<String, Vec<String>>,
}

impl TableMap {
    pub fn new(image: Vec<usize>, sp: &FiniteSpace) -> Result<Self> {
        if image.len() != sp.len() {
            return Err(Error::input(format!(
                "map table has {} entries for {} points",
                image.len(),
                sp.len()
            )));
        }
        for &j in &image {
            sp.check_index(j)?;
        }
        Ok(Self { image })
    }

    pub fn from_spec(spec: &MapSpec, sp: &FiniteSpace) -> Result<Self> {
        let mut image = vec![usize::MAX; sp.len()];
        for (from, to) in &spec.map {
            image[sp.index_of(from)?] = sp.index_of(to)?;
        }
        if let Some(i) = image.iter().position(|&j| j == usize::MAX) {
            return Err(Error::input(format!("map has no image for `{}`", sp.label(i))));
        }
        Ok(Self { image })
    }

    pub fn to_spec(&self, sp: &FiniteSpace) -> MapSpec {
        MapSpec {
            map: self
                .image
                .iter()
                .enumerate()
                .map(|(i, &j)| (sp.label(i).to_string(), sp.label(j).to_string()))
                .collect(),
        }
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }
}

/// A set-valued map `T: X → 2^X` with nonempty images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    images: Vec<Vec<usize>>,
}

impl MultiMap {
    pub fn new(mut images: Vec<Vec<usize>>, sp: &FiniteSpace) -> Result<Self> {
        if images.len() != sp.len() {
            return Err(Error::input(format!(
                "multimap has {} entries for {} points",
                images.len(),
                sp.len()
            )));
        }
        for (i, set) in images.iter_mut().enumerate() {
            if set.is_empty() {
                return Err(Error::input(format!("multimap image of `{}` is empty", sp.label(i))));
            }
            for &j in set.iter() {
                sp.check_index(j)?;
            }
            set.sort_unstable();
            set.dedup();
        }
        Ok(Self { images })
    }

    pub fn from_spec(spec: &MultiMapSpec, sp: &FiniteSpace) -> Result<Self> {
        let mut images: Vec<Option<Vec<usize>>> = vec![None; sp.len()];
        for (from, to) in &spec.map {
            let set = to.iter().map(|l| sp.index_of(l)).collect::<Result<Vec<_>>>()?;
            images[sp.index_of(from)?] = Some(set);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::input(format!("multimap has no image for `{}`", sp.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(images, sp)
    }

    pub fn to_spec(&self, sp: &FiniteSpace) -> MultiMapSpec {
        MultiMapSpec {
            map: self
                .images
                .iter()
                .enumerate()
                .map(|(i, set)| {
                    (
                        sp.label(i).to_string(),
                        set.iter().map(|&j| sp.label(j).to_string()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn apply(&self, i: usize) -> &[usize] {
        &self.images[i]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

impl From<&TableMap> for MultiMap {
    fn from(t: &TableMap) -> Self {
        Self {
            images: t.image.iter().map(|&j| vec![j]).collect(),
        }
    }
}
