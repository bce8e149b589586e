#pragma once

#include "feshbach/core.hpp"
#include "feshbach/quadrature.hpp"
#include "feshbach/model.hpp"
#include "feshbach/contour.hpp"
#include "feshbach/schur.hpp"
#include "feshbach/rootsolver.hpp"
#include "feshbach/riccati.hpp"
#include "feshbach/friedrichs.hpp"
