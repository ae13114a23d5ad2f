#pragma once

#include "lwrctl/flux_model.hpp"
#include "lwrctl/functionals.hpp"
#include "lwrctl/grid_oracle.hpp"
#include "lwrctl/lwr_solver.hpp"
#include "lwrctl/output.hpp"
#include "lwrctl/root_finding.hpp"
#include "lwrctl/scenario.hpp"
#include "lwrctl/synthesis_compound.hpp"
#include "lwrctl/synthesis_single.hpp"
