#pragma once

#include "paramp/config.hpp"
#include "paramp/constants.hpp"
#include "paramp/csv.hpp"
#include "paramp/errors.hpp"
#include "paramp/model.hpp"
#include "paramp/nonlinearity.hpp"
#include "paramp/oracle.hpp"
#include "paramp/pipeline.hpp"
#include "paramp/plot.hpp"
#include "paramp/pump.hpp"
#include "paramp/quantizer.hpp"
#include "paramp/reference_tables.hpp"
#include "paramp/response.hpp"
#include "paramp/version.hpp"
