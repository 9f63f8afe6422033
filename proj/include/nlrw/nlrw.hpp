#ifndef NLRW_NLRW_HPP
#define NLRW_NLRW_HPP

#include "classifier.hpp"
#include "concurrent.hpp"
#include "corpus.hpp"
#include "graph.hpp"
#include "homs.hpp"
#include "io.hpp"
#include "iso.hpp"
#include "limits.hpp"
#include "multi.hpp"
#include "oracles.hpp"
#include "rewrite.hpp"

#endif
