#ifndef AIRY_AIRY_HPP
#define AIRY_AIRY_HPP

#include "airy/closed_form.hpp"
#include "airy/errors.hpp"
#include "airy/integrator.hpp"
#include "airy/invariants.hpp"
#include "airy/io.hpp"
#include "airy/pde.hpp"
#include "airy/poisson.hpp"
#include "airy/polynomial.hpp"
#include "airy/random.hpp"
#include "airy/report.hpp"
#include "airy/series.hpp"
#include "airy/state.hpp"
#include "airy/types.hpp"
#include "airy/vector_fields.hpp"
#include "airy/verify.hpp"

#endif  // AIRY_AIRY_HPP
