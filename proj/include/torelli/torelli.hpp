#pragma once

#include "torelli/field.hpp"
#include "torelli/errors.hpp"
#include "torelli/lattice.hpp"
#include "torelli/laurent.hpp"
#include "torelli/linalg.hpp"
#include "torelli/certified.hpp"
#include "torelli/jacobian.hpp"
#include "torelli/period_kernel.hpp"
#include "torelli/audit.hpp"
#include "torelli/json_io.hpp"
