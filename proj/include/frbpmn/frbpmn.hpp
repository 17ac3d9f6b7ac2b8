#pragma once

// Umbrella header.

#include "frbpmn/bpmn_io.hpp"
#include "frbpmn/conformance.hpp"
#include "frbpmn/emission.hpp"
#include "frbpmn/error.hpp"
#include "frbpmn/flow_graph.hpp"
#include "frbpmn/model.hpp"
#include "frbpmn/report.hpp"
#include "frbpmn/risk_analysis.hpp"
#include "frbpmn/risk_register.hpp"
#include "frbpmn/simulate.hpp"
#include "frbpmn/trace.hpp"
#include "frbpmn/validator.hpp"
