#pragma once

#include "wes/integer.hpp"
#include "wes/error.hpp"
#include "wes/int_matrix.hpp"
#include "wes/smith.hpp"
#include "wes/abelian_group.hpp"
#include "wes/homalg.hpp"
#include "wes/wes_model.hpp"
#include "wes/gamma_enum.hpp"
