#pragma once

#include "bipoly.hpp"
#include "bivector.hpp"
#include "cli.hpp"
#include "curve.hpp"
#include "flow.hpp"
#include "io.hpp"
#include "tensor_core.hpp"
