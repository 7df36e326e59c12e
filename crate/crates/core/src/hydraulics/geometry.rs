use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HydraulicNetwork, Pipe, Reservoir, SurgeTank};
use crate::config::toml_error;
use crate::error::{Error, Result};

/// Default waterway. Lengths and areas are plausible values for a 400 MW
/// high-head unit; friction factors give about 2 % head loss at full load.
pub const DEFAULT_GEOMETRY: &str = include_str!("../../data/frades2.geom");

/// One element of the geometry file, in topological order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Element {
    Reservoir {
        name: String,
        level: f64,
        min_level: f64,
        max_level: f64,
    },
    Pipe {
        name: String,
        length: f64,
        area: f64,
        friction_coefficient: f64,
    },
    SurgeTank {
        name: String,
        section_area: f64,
        level: f64,
        min_level: f64,
        max_level: f64,
    },
    Turbine {
        name: String,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryDocument {
    element: Vec<Element>,
}

impl Element {
    fn kind(&self) -> &'static str {
        match self {
            Element::Reservoir { .. } => "reservoir",
            Element::Pipe { .. } => "pipe",
            Element::SurgeTank { .. } => "surge_tank",
            Element::Turbine { .. } => "turbine",
        }
    }
}

const TOPOLOGY: [&str; 8] = [
    "reservoir",
    "pipe",
    "surge_tank",
    "pipe",
    "turbine",
    "surge_tank",
    "pipe",
    "reservoir",
];

impl HydraulicNetwork {
    /// Builds the network from elements listed upstream to downstream.
    pub fn from_elements(elements: &[Element]) -> Result<Self> {
        let kinds: Vec<&str> = elements.iter().map(Element::kind).collect();
        if kinds != TOPOLOGY {
            return Err(Error::config(format!(
                "waterway must read {} in order, got {}",
                TOPOLOGY.join(" → "),
                kinds.join(" → ")
            )));
        }
        let reservoir = |e: &Element| match e {
            Element::Reservoir {
                name,
                level,
                min_level,
                max_level,
            } => Reservoir {
                name: name.clone(),
                level: *level,
                min_level: *min_level,
                max_level: *max_level,
            },
            _ => unreachable!(),
        };
        let pipe = |e: &Element| match e {
            Element::Pipe {
                name,
                length,
                area,
                friction_coefficient,
            } => Pipe {
                name: name.clone(),
                length: *length,
                area: *area,
                friction_coefficient: *friction_coefficient,
            },
            _ => unreachable!(),
        };
        let tank = |e: &Element| match e {
            Element::SurgeTank {
                name,
                section_area,
                level,
                min_level,
                max_level,
            } => SurgeTank {
                name: name.clone(),
                section_area: *section_area,
                level: *level,
                min_level: *min_level,
                max_level: *max_level,
            },
            _ => unreachable!(),
        };
        let net = HydraulicNetwork {
            upper: reservoir(&elements[0]),
            headrace: pipe(&elements[1]),
            upper_surge: tank(&elements[2]),
            penstock: pipe(&elements[3]),
            lower_surge: tank(&elements[5]),
            tailrace: pipe(&elements[6]),
            lower: reservoir(&elements[7]),
        };
        net.validate()?;
        Ok(net)
    }

    pub fn to_elements(&self) -> Vec<Element> {
        let res = |r: &Reservoir| Element::Reservoir {
            name: r.name.clone(),
            level: r.level,
            min_level: r.min_level,
            max_level: r.max_level,
        };
        let pipe = |p: &Pipe| Element::Pipe {
            name: p.name.clone(),
            length: p.length,
            area: p.area,
            friction_coefficient: p.friction_coefficient,
        };
        let tank = |t: &SurgeTank| Element::SurgeTank {
            name: t.name.clone(),
            section_area: t.section_area,
            level: t.level,
            min_level: t.min_level,
            max_level: t.max_level,
        };
        vec![
            res(&self.upper),
            pipe(&self.headrace),
            tank(&self.upper_surge),
            pipe(&self.penstock),
            Element::Turbine {
                name: "unit1".to_string(),
            },
            tank(&self.lower_surge),
            pipe(&self.tailrace),
            res(&self.lower),
        ]
    }

    pub fn from_geometry_text(text: &str) -> Result<Self> {
        let doc: GeometryDocument = toml::from_str(text).map_err(|e| toml_error(text, &e))?;
        Self::from_elements(&doc.element)
    }

    pub fn to_geometry_text(&self) -> String {
        let doc = GeometryDocument {
            element: self.to_elements(),
        };
        toml::to_string(&doc).expect("geometry serialises")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_geometry_text(&text)
    }

    pub fn default_network() -> Self {
        Self::from_geometry_text(DEFAULT_GEOMETRY).expect("bundled geometry is valid")
    }
}
