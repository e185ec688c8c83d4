from .utility_functions import pop_from_dict_by_set, check_kwargs_empty, as_points, cross_2d
