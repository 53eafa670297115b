#pragma once

#include "fntt/error.hpp"
#include "fntt/modular.hpp"
#include "fntt/rader_registry.hpp"
#include "fntt/transform.hpp"
#include "fntt/convolution.hpp"
#include "fntt/dyadic.hpp"
#include "fntt/sequence_io.hpp"
#include "fntt/bench.hpp"
