//! TSPLIB `EUC_2D` instances and the integer tour-length objective.
//!
//! Distances follow the TSPLIB `nint` convention: the Euclidean distance is
//! rounded with `floor(d + 0.5)`, never with banker's rounding, so that tour
//! lengths agree bit-for-bit with published optima.

use std::fmt::Write as _;
use std::path::Path;

use crate::encoding::Permutation;
use crate::error::{Error, ParseError, Result};

/// Instances up to this many cities get a precomputed distance matrix.
pub const MATRIX_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeightType {
    Euc2d,
}

/// A parsed symmetric TSP instance with 1-based city ids.
#[derive(Debug, Clone)]
pub struct TspInstance {
    name: String,
    coords: Vec<(f64, f64)>,
    edge_weight_type: EdgeWeightType,
    matrix: Option<Vec<u32>>,
}

/// TSPLIB nearest-integer Euclidean distance.
#[inline]
pub fn euc_2d(a: (f64, f64), b: (f64, f64)) -> u32 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    ((dx * dx + dy * dy).sqrt() + 0.5).floor() as u32
}

impl TspInstance {
    /// Builds an instance from coordinates listed in city-id order.
    pub fn from_coords(name: impl Into<String>, coords: Vec<(f64, f64)>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(ParseError::DimensionTooSmall(coords.len()).into());
        }
        let mut instance = TspInstance {
            name: name.into(),
            coords,
            edge_weight_type: EdgeWeightType::Euc2d,
            matrix: None,
        };
        if instance.dimension() <= MATRIX_LIMIT {
            instance.matrix = Some(instance.build_matrix());
        }
        Ok(instance)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_instance(&text).map_err(|e| Error::format(path, e))
    }

    fn build_matrix(&self) -> Vec<u32> {
        let n = self.dimension();
        let mut m = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euc_2d(self.coords[i], self.coords[j]);
                m[i * n + j] = d;
                m[j * n + i] = d;
            }
        }
        m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates indexed by `city_id - 1`.
    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn edge_weight_type(&self) -> EdgeWeightType {
        self.edge_weight_type
    }

    pub fn has_matrix(&self) -> bool {
        self.matrix.is_some()
    }

    /// Distance between two 1-based city ids.
    pub fn distance(&self, i: usize, j: usize) -> Result<u32> {
        let n = self.dimension();
        for id in [i, j] {
            if id == 0 || id > n {
                return Err(Error::CityOutOfRange { id, dimension: n });
            }
        }
        Ok(self.dist0(i - 1, j - 1))
    }

    /// Distance between two 0-based city indices. No range check.
    #[inline]
    pub(crate) fn dist0(&self, i: usize, j: usize) -> u32 {
        match &self.matrix {
            Some(m) => m[i * self.coords.len() + j],
            None => euc_2d(self.coords[i], self.coords[j]),
        }
    }

    /// Closed tour length of a permutation of this instance's cities.
    pub fn tour_length(&self, tour: &Permutation) -> Result<u64> {
        if tour.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: tour.dimension(),
            });
        }
        Ok(self.tour_length_unchecked(tour.as_slice()))
    }

    /// Tour length of a slice of 1-based city ids, assumed to be a valid tour.
    pub fn tour_length_unchecked(&self, order: &[u32]) -> u64 {
        let Some(&last) = order.last() else {
            return 0;
        };
        let mut prev = last as usize - 1;
        let mut total = 0u64;
        for &city in order {
            let c = city as usize - 1;
            total += u64::from(self.dist0(prev, c));
            prev = c;
        }
        total
    }

    /// Serialises back to TSPLIB text. Coordinates use Rust's shortest
    /// round-trip float formatting, so re-parsing yields identical values.
    pub fn to_tsplib_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.dimension());
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for (i, (x, y)) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{} {:?} {:?}", i + 1, x, y);
        }
        out.push_str("EOF\n");
        out
    }
}

/// Parses TSPLIB text with a keyword header followed by `NODE_COORD_SECTION`.
pub fn parse_instance(text: &str) -> Result<TspInstance, ParseError> {
    let mut name = None;
    let mut dimension = None;
    let mut edge_weight_type = None;
    let mut lines = text.lines().enumerate();
    let mut saw_coord_section = false;

    for (idx, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "NODE_COORD_SECTION" {
            saw_coord_section = true;
            break;
        }
        if line == "EOF" {
            break;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(ParseError::MalformedHeader {
                line: idx + 1,
                text: raw.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "NAME" => name = Some(value.to_string()),
            "TYPE" => {
                if value != "TSP" {
                    return Err(ParseError::UnsupportedProblemType(value.to_string()));
                }
            }
            "DIMENSION" => {
                let d = value
                    .parse::<usize>()
                    .map_err(|_| ParseError::MalformedHeader {
                        line: idx + 1,
                        text: raw.to_string(),
                    })?;
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EUC_2D" {
                    return Err(ParseError::UnsupportedEdgeWeightType(value.to_string()));
                }
                edge_weight_type = Some(EdgeWeightType::Euc2d);
            }
            "COMMENT" => {}
            _ if key.is_empty() => {
                return Err(ParseError::MalformedHeader {
                    line: idx + 1,
                    text: raw.to_string(),
                })
            }
            // Other TSPLIB keywords (DISPLAY_DATA_TYPE, ...) carry nothing we use.
            _ => {}
        }
    }

    let name = name.ok_or(ParseError::MissingKeyword("NAME"))?;
    let dimension = dimension.ok_or(ParseError::MissingKeyword("DIMENSION"))?;
    edge_weight_type.ok_or(ParseError::MissingKeyword("EDGE_WEIGHT_TYPE"))?;
    if !saw_coord_section {
        return Err(ParseError::MissingKeyword("NODE_COORD_SECTION"));
    }
    if dimension < 3 {
        return Err(ParseError::DimensionTooSmall(dimension));
    }

    let mut coords: Vec<Option<(f64, f64)>> = vec![None; dimension];
    let mut found = 0usize;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let malformed = || ParseError::MalformedNode {
            line: idx + 1,
            text: raw.to_string(),
        };
        let mut fields = line.split_whitespace();
        let (Some(id), Some(x), Some(y), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(malformed());
        };
        let id: usize = id.parse().map_err(|_| malformed())?;
        let x: f64 = x.parse().map_err(|_| malformed())?;
        let y: f64 = y.parse().map_err(|_| malformed())?;
        found += 1;
        if id == 0 || id > dimension {
            if found > dimension {
                return Err(ParseError::DimensionMismatch {
                    declared: dimension,
                    found,
                });
            }
            return Err(ParseError::NodeIdOutOfRange { id, dimension });
        }
        let slot = &mut coords[id - 1];
        if slot.is_some() {
            return Err(ParseError::DuplicateNode(id));
        }
        *slot = Some((x, y));
    }

    if let Some(missing) = coords.iter().position(Option::is_none) {
        return Err(ParseError::MissingNode(missing + 1));
    }
    let coords: Vec<(f64, f64)> = coords
        .into_iter()
        .map(|c| c.expect("all nodes present"))
        .collect();
    TspInstance::from_coords(name, coords).map_err(|e| match e {
        Error::Parse(p) => p,
        other => unreachable!("from_coords only fails on dimension: {other}"),
    })
}
