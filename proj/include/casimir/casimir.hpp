#pragma once

// Umbrella header: real-frequency-axis Lifshitz theory of the Casimir
// pressure between metal plates, its propagating/evanescent x TM/TE
// decomposition, the Matsubara-representation oracle, and the
// oscillating-dipole lateral-field observable that probes the TE evanescent
// response.

#include "casimir/acceptance.hpp"
#include "casimir/bessel.hpp"
#include "casimir/constants.hpp"
#include "casimir/dipole.hpp"
#include "casimir/io.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/models.hpp"
#include "casimir/parallel.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/reflection.hpp"
