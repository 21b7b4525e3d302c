from .model import (FeatureModel, Feature, Group, CrossTreeConstraint, NameMap, FeatureModelError, Relation,
                    GroupKind, ConstraintKind, enumerate_configurations)
from .parser import parse_fm, write_fm
from .encoding import encode_fm, name_map
from .generator import random_feature_model
