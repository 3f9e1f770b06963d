#pragma once

#include "toralab/exactlat/number.hpp"
#include "toralab/exactlat/int_matrix.hpp"
#include "toralab/exactlat/smith.hpp"
#include "toralab/exactlat/quad_number.hpp"
#include "toralab/exactlat/eigen.hpp"
