//! Exact cohomology of ordered configuration spaces of (punctured) Euclidean
//! space, zero-divisor cup-length certificates for higher topological
//! complexity, and a numerical ambient-isotopy reduction from moving to
//! stationary obstacles.

pub mod certificate;
pub mod closed_forms;
pub mod expr;
pub mod isotopy;
pub mod ring;
pub mod tensor;

pub use expr::{parse, Expr, ParseError};
pub use ring::{basis, Coefficients, Element, Generator, Monomial, RingError, RingSpec};
pub use tensor::{kernel_degree1_basis, SlottedGenerator, TensorElement, TensorError};
pub use certificate::{
    brute_force_zcl, build, build_mu_s, build_nu_s, build_pi, build_pi_punctured, build_w_s,
    standard_certificate, verify, Certificate, CertificateKind, CertificateRecord, VerificationReport,
};
pub use closed_forms::{cat_conf, cl_s_conf, tc_s, tc_s_wedge, upper_bound_dim_conn, TcCase, TcQuery};
pub use isotopy::{
    build_isotopy, map_f, map_f_inverse, map_g, plan_with_moving_obstacles, verify_path, ConfigSequence,
    DetourPlanner, Instance, IsotopyConfig, IsotopyError, IsotopyField, ObstaclePath, RobotPath, StationaryPlanner,
    Trajectory,
};
