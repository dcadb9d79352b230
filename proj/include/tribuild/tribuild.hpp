#pragma once

#include "tribuild/errors.hpp"
#include "tribuild/arith.hpp"
#include "tribuild/perm.hpp"
#include "tribuild/diffsets.hpp"
#include "tribuild/incidence_search.hpp"
#include "tribuild/plane.hpp"
#include "tribuild/pencil_model.hpp"
#include "tribuild/exotic.hpp"
#include "tribuild/ball.hpp"
#include "tribuild/io.hpp"
