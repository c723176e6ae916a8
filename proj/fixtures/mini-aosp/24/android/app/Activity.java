/*
 * Copyright (C) 2008 The Android Open Source Project
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 */

package android.app;

import android.content.Context;
import android.os.RemoteException;

public class Activity extends ContextThemeWrapper {
    private Context mContext;

    /**
     * Finish this activity.
     */
    public void finish() {
        finish(false);
    }

    /**
     * Gets the current notification policy.
     */
    public boolean getNotificationPolicy() {
        INotificationManager service = getService();
        try {
            return service.getNotificationPolicy(mContext.getOpPackageName());
        } catch (RemoteException e) {
            throw e.rethrowFromSystemServer();
        }
    }
}
