#pragma once

#include "abc/categories.hpp"
#include "abc/collusion.hpp"
#include "abc/document.hpp"
#include "abc/error.hpp"
#include "abc/model.hpp"
#include "abc/model_core.hpp"
#include "abc/party.hpp"
#include "abc/reporting.hpp"
#include "abc/risk.hpp"
#include "abc/serialization.hpp"
#include "abc/workbench.hpp"
