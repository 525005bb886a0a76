# Features package: report payloads and the property suite behind check-props
