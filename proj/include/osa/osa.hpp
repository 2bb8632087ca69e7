#pragma once

#include "osa/catalog.hpp"
#include "osa/checks.hpp"
#include "osa/chromatic.hpp"
#include "osa/cli.hpp"
#include "osa/error.hpp"
#include "osa/field.hpp"
#include "osa/graph.hpp"
#include "osa/hyperplane.hpp"
#include "osa/laurent.hpp"
#include "osa/manifold.hpp"
#include "osa/matrix.hpp"
#include "osa/osalg.hpp"
#include "osa/oscomplex.hpp"
#include "osa/poset.hpp"
#include "osa/presheaf.hpp"
