#pragma once

#include "nmfkit/biclique.hpp"
#include "nmfkit/error.hpp"
#include "nmfkit/graph.hpp"
#include "nmfkit/graph_io.hpp"
#include "nmfkit/linalg.hpp"
#include "nmfkit/matrix.hpp"
#include "nmfkit/nf.hpp"
#include "nmfkit/nmf.hpp"
#include "nmfkit/parallel.hpp"
#include "nmfkit/random.hpp"
#include "nmfkit/solve.hpp"
