#pragma once

#include "clq/verifier/cl_checks.hpp"
#include "clq/verifier/decomposition.hpp"
#include "clq/verifier/negative_controls.hpp"
#include "clq/verifier/patterns.hpp"
#include "clq/verifier/stabilizer.hpp"
#include "clq/verifier/tight_kernel.hpp"
