from flask_marshmallow import Marshmallow

"""
This file centralizes the creation of Flask extension instances.
By creating them here without an app, the schemas can import them
without causing circular import errors.
"""
ma = Marshmallow()
