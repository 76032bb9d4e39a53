//! Python module `hedonic`.
//!
//! Coalitions and partitions cross the boundary as player labels (`["a", "b"]`,
//! `[["a", "b"], ["c"]]`); utilities come back as `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use hedonic_core::doc::{coalition_from_labels, labels_of, PartitionDocument, PARTITION_FORMAT};
use hedonic_core::search::{compute_core, enumerate_partitions, HuntConfig};
use hedonic_core::stability::{certify, find_blocking_coalition, StabilityNotion};
use hedonic_core::wire::{to_json, CertifyResponse};
use hedonic_core::{
    compare, parse_game, serialize_game, utility, Aggregation, Coalition, Game, ModelAssignment,
    Partition, PreferenceModel, PreferenceOrdering, Rational,
};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_model(tag: &str) -> Result<PreferenceModel, String> {
    match tag.split_once(':') {
        Some((fr, agg)) if fr.eq_ignore_ascii_case("FR") => {
            Ok(PreferenceModel::Fractional(agg.parse::<Aggregation>()?))
        }
        _ => PreferenceModel::from_tag(tag, Aggregation::default()),
    }
}

fn to_fraction<'py>(py: Python<'py>, r: Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer(), r.denom()))
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((text,))
}

/// A validated game: players, friendship graph, optional valuations and models.
#[pyclass(name = "Game", module = "hedonic", frozen)]
pub struct PyGame {
    inner: Game,
}

impl PyGame {
    fn coalition(&self, labels: Vec<String>) -> PyResult<Coalition> {
        coalition_from_labels(&self.inner, &labels).map_err(value_error)
    }

    fn partition(&self, blocks: Vec<Vec<String>>) -> PyResult<Partition> {
        PartitionDocument {
            format: PARTITION_FORMAT.to_string(),
            blocks,
        }
        .resolve(&self.inner)
        .map_err(value_error)
    }

    fn player(&self, label: &str) -> PyResult<usize> {
        self.inner
            .index_of(label)
            .ok_or_else(|| value_error(format!("unknown player `{label}`")))
    }
}

#[pymethods]
impl PyGame {
    /// Build from player labels and friendship edges; `model` is a tag such as
    /// "FO", "AL" or "FR:sum". Fractional games take an n×n matrix of "p/q" strings.
    #[new]
    #[pyo3(signature = (players, edges, model = "FO", valuations = None))]
    fn new(
        players: Vec<String>,
        edges: Vec<(String, String)>,
        model: &str,
        valuations: Option<Vec<Vec<String>>>,
    ) -> PyResult<Self> {
        let model = parse_model(model).map_err(value_error)?;
        let index = |l: &str| {
            players
                .iter()
                .position(|p| p == l)
                .ok_or_else(|| value_error(format!("unknown player `{l}` in edge")))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let valuations = valuations
            .map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(|v| v.parse::<Rational>()).collect())
                    .collect::<Result<Vec<Vec<_>>, _>>()
            })
            .transpose()
            .map_err(value_error)?;
        let valuations = match valuations {
            None if model.is_fractional() => {
                let graph = hedonic_core::FriendshipGraph::from_edges(players.len(), &edges)
                    .map_err(value_error)?;
                Some(
                    (0..players.len())
                        .map(|i| {
                            (0..players.len())
                                .map(|j| Rational::integer(graph.has_edge(i, j) as i128))
                                .collect()
                        })
                        .collect(),
                )
            }
            v => v,
        };
        let inner = Game::build(players, &edges, valuations, ModelAssignment::Uniform(model))
            .map_err(value_error)?;
        Ok(PyGame { inner })
    }

    /// Parse a `hedonic-game/1` JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_game(text)
            .map(|inner| PyGame { inner })
            .map_err(value_error)
    }

    /// The five-player example: clique {a,b,c,d} plus the edge a–e.
    #[staticmethod]
    #[pyo3(signature = (model = "AL"))]
    fn story(model: &str) -> PyResult<Self> {
        let model = parse_model(model).map_err(value_error)?;
        Ok(PyGame {
            inner: hedonic_core::fixtures::story(model),
        })
    }

    fn to_json(&self) -> String {
        serialize_game(&self.inner)
    }

    /// Same game with every player switched to `model`.
    fn with_model(&self, model: &str) -> PyResult<Self> {
        let model = parse_model(model).map_err(value_error)?;
        self.inner
            .with_uniform_model(model)
            .map(|inner| PyGame { inner })
            .map_err(value_error)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn players(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn models(&self) -> Vec<&'static str> {
        self.inner.models().iter().map(|m| m.tag()).collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings().to_vec()
    }

    /// Exact utility of `player` for `coalition`, which must contain them.
    fn utility<'py>(
        &self,
        py: Python<'py>,
        player: &str,
        coalition: Vec<String>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let i = self.player(player)?;
        let c = self.coalition(coalition)?;
        let u = utility(&self.inner, i, c).map_err(value_error)?;
        to_fraction(py, u)
    }

    /// 1 if `player` strictly prefers `c` to `d`, -1 for the reverse, 0 when indifferent.
    fn compare(&self, player: &str, c: Vec<String>, d: Vec<String>) -> PyResult<i8> {
        let i = self.player(player)?;
        let (c, d) = (self.coalition(c)?, self.coalition(d)?);
        Ok(match compare(&self.inner, i, c, d).map_err(value_error)? {
            PreferenceOrdering::StrictlyPrefers => 1,
            PreferenceOrdering::Indifferent => 0,
            PreferenceOrdering::StrictlyDispreferred => -1,
        })
    }

    /// Lowest-bitmask coalition whose members all strictly prefer it, or None.
    fn find_blocking_coalition(
        &self,
        partition: Vec<Vec<String>>,
    ) -> PyResult<Option<Vec<String>>> {
        let p = self.partition(partition)?;
        Ok(find_blocking_coalition(&self.inner, &p).map(|c| labels_of(&self.inner, c)))
    }

    /// Stability report as a dict; `notions` defaults to all four.
    #[pyo3(signature = (partition, notions = None))]
    fn certify<'py>(
        &self,
        py: Python<'py>,
        partition: Vec<Vec<String>>,
        notions: Option<Vec<String>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let p = self.partition(partition)?;
        let notions = match notions {
            None => StabilityNotion::ALL.to_vec(),
            Some(list) => list
                .iter()
                .map(|s| s.parse::<StabilityNotion>())
                .collect::<Result<_, _>>()
                .map_err(value_error)?,
        };
        let report = py.detach(|| certify(&self.inner, &p, &notions));
        json_loads(py, &to_json(&CertifyResponse::new(&self.inner, &report)))
    }

    /// Every core-stable partition, as lists of label blocks.
    fn core(&self, py: Python<'_>) -> PyResult<Vec<Vec<Vec<String>>>> {
        let result = py
            .detach(|| compute_core(&self.inner))
            .map_err(value_error)?;
        Ok(result
            .partitions
            .iter()
            .map(|p| {
                p.blocks()
                    .iter()
                    .map(|&c| labels_of(&self.inner, c))
                    .collect()
            })
            .collect())
    }

    fn __repr__(&self) -> String {
        let models = self.models();
        let model = if models.iter().all(|m| *m == models[0]) {
            models[0].to_string()
        } else {
            "mixed".to_string()
        };
        format!(
            "Game(n={}, edges={}, model={model})",
            self.inner.n(),
            self.inner.graph().edge_count()
        )
    }
}

/// Set partitions of {0..n-1} in canonical order.
#[pyfunction]
fn enumerate_partitions_py(n: usize) -> PyResult<Vec<Vec<Vec<usize>>>> {
    Ok(enumerate_partitions(n)
        .map_err(value_error)?
        .map(|p| p.to_index_lists())
        .collect())
}

/// Sweep every friendship graph with up to `n_max` players; returns the report dict.
#[pyfunction]
#[pyo3(signature = (model, n_max, connected_only = false, workers = 1))]
fn hunt_empty_core<'py>(
    py: Python<'py>,
    model: &str,
    n_max: usize,
    connected_only: bool,
    workers: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let model = parse_model(model).map_err(value_error)?;
    let mut config = HuntConfig::new(model, n_max, connected_only);
    config.workers = workers.max(1);
    let report = py.detach(|| config.run(None)).map_err(value_error)?;
    json_loads(py, &report.to_json())
}

#[pymodule]
fn hedonic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(hunt_empty_core, m)?)?;
    let enumerate = wrap_pyfunction!(enumerate_partitions_py, m)?;
    m.add("enumerate_partitions", enumerate)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
