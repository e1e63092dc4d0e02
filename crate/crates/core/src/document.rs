//! JSON input documents: a braiding matrix plus optional relations, recipes and caps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bichar::{BraidingMatrix, IntVec};
use crate::catalog::CatalogEntry;
use crate::cyclo::CyclotomicContext;
use crate::error::{Error, Result};
use crate::freealg::{FreeAlgebra, FreeElem};
use crate::pbw::Recipe;
use crate::quotient::RelationSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeEntry {
    pub root: Vec<i64>,
    pub recipe: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentCaps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub zeta_order: u32,
    pub size: usize,
    pub matrix: Vec<Vec<String>>,
    /// Element text such as `11 - 2*z*12` or recipe s-expressions such as `(pow 2 2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipes: Option<Vec<RecipeEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<DocumentCaps>,
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InputDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("input document: {e}")))?;
        if doc.matrix.len() != doc.size {
            return Err(Error::Parse(format!(
                "size is {} but the matrix has {} rows",
                doc.size,
                doc.matrix.len()
            )));
        }
        Ok(doc)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_braiding(b: &BraidingMatrix) -> Self {
        Self {
            name: None,
            description: None,
            zeta_order: b.context().order(),
            size: b.theta(),
            matrix: b.to_strings(),
            relations: None,
            recipes: None,
            caps: None,
        }
    }

    pub fn from_catalog(entry: &CatalogEntry) -> Self {
        let relations: Vec<String> = entry
            .relations
            .iter()
            .chain(&entry.extra_relations)
            .map(|r| r.to_string())
            .collect();
        let recipes: Vec<RecipeEntry> = entry
            .recipes
            .iter()
            .map(|(root, r)| RecipeEntry {
                root: root.0.clone(),
                recipe: r.to_string(),
            })
            .collect();
        Self {
            name: Some(entry.name.clone()),
            description: Some(entry.description.clone()),
            relations: Some(relations),
            recipes: (!recipes.is_empty()).then_some(recipes),
            ..Self::from_braiding(&entry.braiding)
        }
    }

    pub fn context(&self) -> Result<Arc<CyclotomicContext>> {
        CyclotomicContext::new(self.zeta_order)
    }

    pub fn braiding(&self) -> Result<BraidingMatrix> {
        BraidingMatrix::from_strings(&self.context()?, &self.matrix)
    }

    pub fn algebra(&self) -> Result<Arc<FreeAlgebra>> {
        Ok(Arc::new(FreeAlgebra::new(self.braiding()?)))
    }

    pub fn relation_set(&self, a: &FreeAlgebra) -> Result<Option<RelationSet>> {
        let Some(rels) = &self.relations else {
            return Ok(None);
        };
        let gens = rels
            .iter()
            .map(|t| parse_relation(a, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(RelationSet::new(
            self.name.clone().unwrap_or_else(|| "input".into()),
            gens,
        )))
    }

    pub fn recipe_overrides(&self) -> Result<Vec<(IntVec, Recipe)>> {
        let ctx = self.context()?;
        self.recipes
            .iter()
            .flatten()
            .map(|e| {
                if e.root.len() != self.size {
                    return Err(Error::Parse(format!(
                        "recipe root {:?} has the wrong length",
                        e.root
                    )));
                }
                Ok((IntVec(e.root.clone()), Recipe::parse(&ctx, &e.recipe)?))
            })
            .collect()
    }
}

/// Recipe syntax when the text starts with `(` and parses as one, element syntax otherwise.
pub fn parse_relation(a: &FreeAlgebra, text: &str) -> Result<FreeElem> {
    if text.trim_start().starts_with('(') {
        if let Ok(r) = Recipe::parse(a.ctx(), text) {
            return r.expand(a);
        }
    }
    a.parse(text)
}
