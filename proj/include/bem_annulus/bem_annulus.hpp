#pragma once

#include "bem_annulus/coupling_io.hpp"
#include "bem_annulus/error.hpp"
#include "bem_annulus/field.hpp"
#include "bem_annulus/geometry.hpp"
#include "bem_annulus/kernel.hpp"
#include "bem_annulus/oracle.hpp"
#include "bem_annulus/scenario.hpp"
#include "bem_annulus/system.hpp"
