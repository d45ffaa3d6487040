//! Python bindings: codes, partitions, doubling, invariants, quotient
//! summaries, schedule verification, and triple-system typing.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use spcodes::bitcode;
use spcodes::io;
use spcodes::partitions;
use spcodes::sqsgraph;
use spcodes::ststype;

fn err(e: spcodes::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A binary code: a set of words of one common length, stored as bitmasks.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Code {
    inner: bitcode::Code,
}

#[pymethods]
impl Code {
    #[new]
    fn new(masks: Vec<u16>, length: usize) -> PyResult<Self> {
        Ok(Code {
            inner: bitcode::Code::from_masks(masks, length).map_err(err)?,
        })
    }

    /// Reads a `.code` file.
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Code {
            inner: io::read_code(&path).map_err(err)?,
        })
    }

    /// Writes the code to a `.code` file.
    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_code(&path, &self.inner, &[]).map_err(err)
    }

    fn masks(&self) -> Vec<u16> {
        self.inner.masks().to_vec()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.len()
    }

    fn contains(&self, mask: u16) -> bool {
        self.inner.contains(mask)
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __eq__(&self, other: &Code) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Code(length={}, words={})",
            self.inner.len(),
            self.inner.size()
        )
    }
}

/// An extended 1-perfect partition of the even words of length 8 into eight
/// classes of sixteen.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Partition {
    inner: partitions::ExtendedPartition,
}

#[pymethods]
impl Partition {
    /// The partition into cosets of the frame unit code.
    #[staticmethod]
    fn linear() -> Self {
        Partition {
            inner: partitions::linear_partition(),
        }
    }

    /// Reads a `.part` file.
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Partition {
            inner: io::read_partition(&path).map_err(err)?,
        })
    }

    /// Writes the partition to a `.part` file.
    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_partition(&path, &self.inner, &[]).map_err(err)
    }

    /// The eight classes as lists of masks.
    fn classes(&self) -> Vec<Vec<u16>> {
        self.inner
            .classes()
            .iter()
            .map(|c| c.masks().to_vec())
            .collect()
    }

    /// Order-independent digest of the class system.
    fn fingerprint(&self) -> u64 {
        self.inner.fingerprint()
    }

    /// Dimension of the subspace of translations fixing every class.
    fn core_dimension(&self) -> usize {
        partitions::partition_core(&self.inner).dimension()
    }

    fn __eq__(&self, other: &Partition) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Partition(fingerprint={:016x}, core_dimension={})",
            self.inner.fingerprint(),
            partitions::partition_core(&self.inner).dimension()
        )
    }
}

/// Outcome of verifying a code against the quotient-graph schedule.
#[pyclass(frozen)]
struct Report {
    #[pyo3(get)]
    passed: bool,
    #[pyo3(get)]
    kappa: usize,
    #[pyo3(get)]
    rank: usize,
    #[pyo3(get)]
    vertices: usize,
    #[pyo3(get)]
    loop_multiplicity: usize,
    #[pyo3(get)]
    text: String,
    failed: Vec<(String, String)>,
}

#[pymethods]
impl Report {
    /// `(name, detail)` of every failed check.
    fn failed_checks(&self) -> Vec<(String, String)> {
        self.failed.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(kappa={}, vertices={}, loop_multiplicity={}, passed={})",
            self.kappa, self.vertices, self.loop_multiplicity, self.passed
        )
    }
}

/// Size and multiplicity summary of a kernel quotient.
#[pyclass(frozen)]
struct Quotient {
    #[pyo3(get)]
    vertices: usize,
    #[pyo3(get)]
    loop_multiplicities: Vec<usize>,
    #[pyo3(get)]
    vertex_sums: Vec<usize>,
    #[pyo3(get)]
    text: String,
}

/// The thirty length-8 extended 1-perfect codes through zero.
#[pyfunction]
fn unit_codes() -> Vec<Code> {
    partitions::enumerate_unit_codes()
        .into_iter()
        .map(|inner| Code { inner })
        .collect()
}

/// Deterministic partition search seeded with `first_class`.
#[pyfunction]
fn search_partitions(first_class: &Code, limit: usize) -> PyResult<Vec<Partition>> {
    Ok(partitions::search_partitions(&first_class.inner, limit)
        .map_err(err)?
        .into_iter()
        .map(|inner| Partition { inner })
        .collect())
}

/// Doubles two partitions through the class permutation `sigma`.
#[pyfunction]
fn double(left: &Partition, right: &Partition, sigma: Vec<u8>) -> PyResult<Code> {
    let images: [u8; 8] = sigma
        .try_into()
        .map_err(|v: Vec<u8>| PyValueError::new_err(format!("sigma needs 8 images, got {}", v.len())))?;
    let sigma = partitions::Permutation::new(images).map_err(err)?;
    Ok(Code {
        inner: partitions::double(&left.inner, &right.inner, &sigma).map_err(err)?,
    })
}

/// Recovers the two partitions and permutation of a doubled code.
#[pyfunction]
fn decompose(code: &Code) -> PyResult<(Partition, Partition, Vec<u8>)> {
    let (p, q, sigma) = partitions::decompose_doubling(&code.inner).map_err(err)?;
    Ok((
        Partition { inner: p },
        Partition { inner: q },
        sigma.images().to_vec(),
    ))
}

#[pyfunction]
fn rank(code: &Code) -> usize {
    bitcode::rank(&code.inner)
}

#[pyfunction]
fn kernel_dimension(code: &Code) -> usize {
    bitcode::kernel(&code.inner).dimension()
}

#[pyfunction]
fn kernel_basis(code: &Code) -> Vec<u16> {
    bitcode::kernel(&code.inner).basis().to_vec()
}

#[pyfunction]
fn is_extended_perfect(code: &Code) -> PyResult<bool> {
    bitcode::is_extended_perfect(&code.inner).map_err(err)
}

/// Builds the quotient of the minimum-distance graph modulo the kernel.
#[pyfunction]
fn quotient(code: &Code) -> PyResult<Quotient> {
    let k = bitcode::kernel(&code.inner);
    let g = sqsgraph::quotient_graph(&code.inner, &k).map_err(err)?;
    let n = g.vertex_count();
    Ok(Quotient {
        vertices: n,
        loop_multiplicities: (0..n).map(|i| g.multiplicity(i, i)).collect(),
        vertex_sums: (0..n).map(|i| g.vertex_multiplicity_sum(i)).collect(),
        text: g.render(),
    })
}

/// Verifies the code against the schedule for its kernel dimension.
#[pyfunction]
fn verify(code: &Code) -> PyResult<Report> {
    let report = spcodes::verify::verify_code(&code.inner).map_err(err)?;
    Ok(Report {
        passed: report.passed(),
        kappa: report.kappa,
        rank: report.rank,
        vertices: report.vertices,
        loop_multiplicity: report.loop_multiplicity,
        text: report.render(),
        failed: report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| (c.name.to_string(), c.detail.clone()))
            .collect(),
    })
}

/// One `(representative, letters)` pair per kernel coset: the sixteen
/// derived triple-system type letters in coordinate order.
#[pyfunction]
fn type_profiles(code: &Code) -> PyResult<Vec<(u16, String)>> {
    Ok(ststype::code_type_profile(&code.inner)
        .map_err(err)?
        .into_iter()
        .map(|p| (p.representative, p.letters))
        .collect())
}

/// `"STS-homogeneous"`, `"SQS-homogeneous"`, or `"heterogeneous"`.
#[pyfunction]
fn homogeneity(code: &Code) -> PyResult<String> {
    let profiles = ststype::code_type_profile(&code.inner).map_err(err)?;
    Ok(ststype::homogeneity_class(&profiles).to_string())
}

#[pymodule]
fn spcodes_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Code>()?;
    m.add_class::<Partition>()?;
    m.add_class::<Report>()?;
    m.add_class::<Quotient>()?;
    m.add_function(wrap_pyfunction!(unit_codes, m)?)?;
    m.add_function(wrap_pyfunction!(search_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(double, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_basis, m)?)?;
    m.add_function(wrap_pyfunction!(is_extended_perfect, m)?)?;
    m.add_function(wrap_pyfunction!(quotient, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(type_profiles, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneity, m)?)?;
    Ok(())
}
