use ::bbt_polar as bp;
use bp::construction::construct_ga;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: bp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn method(name: &str) -> PyResult<bp::Method> {
    name.parse().map_err(err)
}

fn crc_config(crc: usize) -> PyResult<Option<bp::CrcConfig>> {
    match crc {
        0 => Ok(None),
        11 => Ok(Some(bp::CrcConfig::crc11())),
        c => Err(PyValueError::new_err(format!("unsupported CRC length {c}; use 0 or 11"))),
    }
}

/// `Vec<u8>` would surface as `bytes`; bit vectors go out as int lists.
fn bits(v: Vec<u8>) -> Vec<u32> {
    v.into_iter().map(u32::from).collect()
}

fn ops_dict<'py>(py: Python<'py>, ops: &bp::OpCounter) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("f_ops", ops.f_ops)?;
    d.set_item("g_ops", ops.g_ops)?;
    d.set_item("copy_ops", ops.copy_ops)?;
    d.set_item("total", ops.total())?;
    Ok(d)
}

#[pyclass(name = "RateProfile", from_py_object)]
#[derive(Clone)]
struct PyRateProfile(bp::RateProfile);

#[pymethods]
impl PyRateProfile {
    #[new]
    #[pyo3(signature = (n, active, method = "custom"))]
    fn new(n: usize, active: Vec<usize>, method: &str) -> PyResult<Self> {
        Ok(Self(bp::RateProfile::new(n, active, self::method(method)?).map_err(err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self(bp::RateProfile::from_json(text).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    #[getter]
    fn method(&self) -> String {
        self.0.method.to_string()
    }

    #[getter]
    fn active(&self) -> Vec<usize> {
        self.0.active.clone()
    }

    fn __repr__(&self) -> String {
        format!("RateProfile(n={}, k={}, method={:?})", self.0.n, self.0.k, self.0.method.to_string())
    }
}

/// Rate profile from a construction method (`ga`, `mhw`, `pw`).
#[pyfunction]
#[pyo3(signature = (method, n, k, design_snr_db = None))]
fn construct(method: &str, n: usize, k: usize, design_snr_db: Option<f64>) -> PyResult<PyRateProfile> {
    let m = self::method(method)?;
    let p = match (m, design_snr_db) {
        (bp::Method::Ga, Some(db)) => construct_ga(n, k, db, k.max(1) as f64 / n as f64),
        _ => bp::construct(m, n, k),
    };
    Ok(PyRateProfile(p.map_err(err)?))
}

#[pyclass(name = "PolarCode", skip_from_py_object)]
struct PyPolarCode(bp::PolarCode);

#[pymethods]
impl PyPolarCode {
    #[new]
    #[pyo3(signature = (profile, min_sum = false))]
    fn new(profile: PyRateProfile, min_sum: bool) -> PyResult<Self> {
        let rule = if min_sum { bp::FRule::MinSum } else { bp::FRule::Exact };
        Ok(Self(bp::PolarCode::new(profile.0).map_err(err)?.with_f_rule(rule)))
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn profile(&self) -> PyRateProfile {
        PyRateProfile(self.0.profile().clone())
    }

    /// Encodes data bits; with `crc=11` the CRC is appended first.
    #[pyo3(signature = (data, crc = 0))]
    fn encode(&self, data: Vec<u8>, crc: usize) -> PyResult<Vec<u32>> {
        match crc_config(crc)? {
            Some(c) => self.0.encode_with_crc(&data, &c),
            None => self.0.encode(&data),
        }
        .map(bits)
        .map_err(err)
    }

    /// Returns `(data, op_counts)`.
    fn sc_decode<'py>(&self, py: Python<'py>, llrs: Vec<f64>) -> PyResult<(Vec<u32>, Bound<'py, PyDict>)> {
        let mut ops = bp::OpCounter::default();
        let data = py.detach(|| self.0.sc_decode(&llrs, &mut ops)).map_err(err)?;
        Ok((bits(data), ops_dict(py, &ops)?))
    }

    /// Returns `(data, op_counts)`; with `crc=11` returns `(data, crc_ok, op_counts)`.
    #[pyo3(signature = (llrs, list_size, crc = 0))]
    fn scl_decode<'py>(
        &self,
        py: Python<'py>,
        llrs: Vec<f64>,
        list_size: usize,
        crc: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mut ops = bp::OpCounter::default();
        match crc_config(crc)? {
            Some(c) => {
                let r = py.detach(|| self.0.ca_scl_decode(&llrs, list_size, &c, &mut ops)).map_err(err)?;
                (bits(r.data), r.crc_ok, ops_dict(py, &ops)?).into_pyobject(py).map(|t| t.into_any())
            }
            None => {
                let data = py.detach(|| self.0.scl_decode(&llrs, list_size, &mut ops)).map_err(err)?;
                (bits(data), ops_dict(py, &ops)?).into_pyobject(py).map(|t| t.into_any())
            }
        }
    }

    fn sc_op_count(&self) -> u64 {
        self.0.sc_op_count()
    }

    /// Pruned sub-tree for partitioned decoding with threshold `tau`.
    fn subtree(&self, tau: usize) -> PyResult<PyDecodingSubTree> {
        Ok(PyDecodingSubTree(bp::DecodingSubTree::new(&self.0, tau).map_err(err)?))
    }
}

#[pyclass(name = "DecodingSubTree", skip_from_py_object)]
struct PyDecodingSubTree(bp::DecodingSubTree);

#[pymethods]
impl PyDecodingSubTree {
    #[getter]
    fn tau(&self) -> usize {
        self.0.tau()
    }

    /// `(node, length, dimension, span_start)` per decoding leaf.
    fn leaves(&self) -> Vec<(usize, usize, usize, usize)> {
        self.0.leaves().iter().map(|l| (l.node, l.len, l.dimension, l.span_start)).collect()
    }

    fn codebook(&self, t: usize) -> PyResult<Vec<Vec<u32>>> {
        if t >= self.0.leaves().len() {
            return Err(PyValueError::new_err(format!("no decoding leaf {t}")));
        }
        Ok(self.0.codebook(t).codewords.iter().cloned().map(bits).collect())
    }

    fn llr_op_count(&self) -> u64 {
        self.0.llr_op_count()
    }

    fn psc_decode<'py>(&self, py: Python<'py>, llrs: Vec<f64>) -> PyResult<(Vec<u32>, Bound<'py, PyDict>)> {
        let mut ops = bp::OpCounter::default();
        let data = py.detach(|| self.0.psc_decode(&llrs, &mut ops)).map_err(err)?;
        Ok((bits(data), ops_dict(py, &ops)?))
    }

    #[pyo3(signature = (llrs, list_size, crc = 0))]
    fn pscl_decode<'py>(
        &self,
        py: Python<'py>,
        llrs: Vec<f64>,
        list_size: usize,
        crc: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mut ops = bp::OpCounter::default();
        match crc_config(crc)? {
            Some(c) => {
                let r = py.detach(|| self.0.ca_pscl_decode(&llrs, list_size, &c, &mut ops)).map_err(err)?;
                (bits(r.data), r.crc_ok, ops_dict(py, &ops)?).into_pyobject(py).map(|t| t.into_any())
            }
            None => {
                let data = py.detach(|| self.0.pscl_decode(&llrs, list_size, &mut ops)).map_err(err)?;
                (bits(data), ops_dict(py, &ops)?).into_pyobject(py).map(|t| t.into_any())
            }
        }
    }

    /// `{"g_ub", "b_ub", "lb"}` at channel noise deviation `sigma`.
    fn fer_bounds<'py>(&self, py: Python<'py>, sigma: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = py.detach(|| bp::fer_bounds(&self.0, sigma)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("g_ub", r.g_ub)?;
        d.set_item("b_ub", r.b_ub)?;
        d.set_item("lb", r.lb)?;
        Ok(d)
    }
}

#[pyfunction]
fn generator_matrix(n: usize) -> PyResult<Vec<Vec<u32>>> {
    Ok(bp::GeneratorMatrix::new(n).map_err(err)?.rows().iter().cloned().map(bits).collect())
}

#[pyfunction]
fn f_func(a: f64, b: f64) -> f64 {
    bp::f_func(a, b)
}

#[pyfunction]
fn g_func(a: f64, b: f64, c: u8) -> f64 {
    bp::g_func(a, b, c)
}

#[pyfunction]
fn q_func(x: f64) -> f64 {
    bp::q_func(x)
}

#[pyfunction]
fn psi_func(rho: f64, x: f64, y: f64) -> PyResult<f64> {
    bp::psi_func(rho, x, y).map_err(err)
}

#[pyfunction]
fn sigma_from_ebn0(ebn0_db: f64, rate: f64) -> PyResult<f64> {
    bp::sigma_from_ebn0(ebn0_db, rate).map_err(err)
}

/// Monte-Carlo run; takes and returns the JSON forms used by the CLI.
#[pyfunction]
fn simulate_json(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let config: bp::SimConfig = serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.detach(|| bp::run_simulation(&config).and_then(|r| r.to_json())).map_err(err)
}

/// Default simulation config as JSON, to be edited and passed to `simulate_json`.
#[pyfunction]
fn default_sim_config(n: usize, k: usize, decoder: &str) -> PyResult<String> {
    let kind: bp::DecoderKind = decoder.parse().map_err(err)?;
    serde_json::to_string(&bp::SimConfig::new(n, k, kind)).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule(name = "bbt_polar")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRateProfile>()?;
    m.add_class::<PyPolarCode>()?;
    m.add_class::<PyDecodingSubTree>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(generator_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(f_func, m)?)?;
    m.add_function(wrap_pyfunction!(g_func, m)?)?;
    m.add_function(wrap_pyfunction!(q_func, m)?)?;
    m.add_function(wrap_pyfunction!(psi_func, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_from_ebn0, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_json, m)?)?;
    m.add_function(wrap_pyfunction!(default_sim_config, m)?)?;
    Ok(())
}
