#pragma once

#include "synccert/certifier.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/graph.hpp"
#include "synccert/parallel.hpp"
#include "synccert/serialization.hpp"
#include "synccert/spectral.hpp"
