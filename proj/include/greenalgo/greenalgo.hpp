#pragma once

#include "greenalgo/errors.hpp"
#include "greenalgo/model.hpp"
#include "greenalgo/reference_data.hpp"
#include "greenalgo/scenario.hpp"
#include "greenalgo/ingest.hpp"
#include "greenalgo/interface/request.hpp"
#include "greenalgo/interface/report.hpp"
#include "greenalgo/interface/presets.hpp"
#include "greenalgo/interface/service.hpp"
